#!/usr/bin/env python3
"""Generate classical modular polynomial data files phi_<ell>.txt.

For each level ell, the ell+1 conjugate series j(q^ell) and j(zeta^a u)
(u^ell = q, zeta^ell = 1) are combined through power sums: the sum of the
a-indexed conjugates' nth powers is ell times the part of j(u)^n supported
on exponents divisible by ell. Newton's identities recover the elementary
symmetric functions, and each one is then expressed as an integer polynomial
in j(q) by greedy elimination of its principal part.

Everything is exact integer arithmetic on truncated Laurent series, and the
run aborts unless a battery of identities holds exactly: known j(q)
coefficients, integrality of every Newton division, vanishing of every
elimination remainder through the full precision window, symmetry of the
assembled coefficient map, and the Kronecker congruence
Phi_ell(X, Y) = (X^ell - Y)(X - Y^ell) mod ell.

Usage: generate_modular_polynomials.py <outdir> [ell...]
With no explicit levels, generates all odd primes up to 61.
"""

import sys
from pathlib import Path

MARGIN = 8  # extra holomorphic q-coefficients checked beyond q^0


def fail(msg):
    raise SystemExit(f"validation failure: {msg}")


# ----- truncated integer series on exponent windows -----
# A series is (lo, coeffs) meaning sum coeffs[k] * q^(lo + k).


def strip(lo, c):
    i = 0
    while i < len(c) and c[i] == 0:
        i += 1
    j = len(c)
    while j > i and c[j - 1] == 0:
        j -= 1
    return lo + i, c[i:j]


def series_add(f, g, scale=1):
    (flo, fc), (glo, gc) = f, g
    if not gc:
        return f
    if not fc:
        return glo, [scale * x for x in gc]
    lo = min(flo, glo)
    hi = max(flo + len(fc), glo + len(gc))
    out = [0] * (hi - lo)
    for k, x in enumerate(fc):
        out[flo - lo + k] += x
    for k, x in enumerate(gc):
        out[glo - lo + k] += scale * x
    return strip(lo, out)


def series_mul(f, g, hi):
    """Product truncated to exponents < hi (schoolbook; windows are short)."""
    (flo, fc), (glo, gc) = f, g
    if not fc or not gc:
        return 0, []
    lo = flo + glo
    out = [0] * max(0, hi - lo)
    for a, x in enumerate(fc):
        if x == 0:
            continue
        base = flo + a + glo - lo
        lim = hi - lo - base
        for b, y in enumerate(gc[: max(0, lim)]):
            out[base + b] += x * y
    return strip(lo, out)


def coeff(f, n):
    lo, c = f
    return c[n - lo] if lo <= n < lo + len(c) else 0


# ----- dense nonnegative series products via integer packing -----


def packed_mul(fc, gc, out_len):
    """Convolution of nonnegative coefficient lists, truncated to out_len."""
    if not fc or not gc:
        return [0] * out_len
    bits = max(max(fc).bit_length() + max(gc).bit_length() + min(len(fc), len(gc)).bit_length(), 8)
    width = (bits + 7) // 8  # byte-aligned digit stride
    fb = b"".join(x.to_bytes(width, "little") for x in fc)
    gb = b"".join(x.to_bytes(width, "little") for x in gc)
    prod = (int.from_bytes(fb, "little") * int.from_bytes(gb, "little")).to_bytes(
        width * (len(fc) + len(gc)), "little"
    )
    return [
        int.from_bytes(prod[k * width : (k + 1) * width], "little") for k in range(out_len)
    ]


# ----- j(q) = E4^3 / Delta as an exact integer q-series -----


def eta_exponents(terms):
    """prod (1-q^n) via the pentagonal number theorem: sparse +-1 list."""
    out = {0: 1}
    k = 1
    while True:
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < terms:
                out[g] = 1 if k % 2 == 0 else -1
        if k * (3 * k - 1) // 2 >= terms:
            break
        k += 1
    return sorted(out.items())


def j_series(terms):
    """Coefficients c_{-1}..c_{terms-2} of j(q), as (lo=-1, list)."""
    # E4 = 1 + 240 sum sigma_3(n) q^n, all coefficients positive.
    sigma3 = [0] * terms
    for d in range(1, terms):
        cube = d * d * d
        for m in range(d, terms, d):
            sigma3[m] += cube
    e4 = [1] + [240 * s for s in sigma3[1:]]
    e4sq = packed_mul(e4, e4, terms)
    e4cb = packed_mul(e4sq, e4, terms)
    # Divide by q * prod(1-q^n)^24: 24 exact divisions by the sparse
    # pentagonal series (unit constant term, so divisibility is automatic).
    pent = eta_exponents(terms)
    cur = e4cb
    for _ in range(24):
        quo = [0] * terms
        for n in range(terms):
            acc = cur[n]
            for g, s in pent[1:]:
                if g > n:
                    break
                acc -= s * quo[n - g]
            quo[n] = acc
        cur = quo
    j = (-1, cur)
    for n, want in ((-1, 1), (0, 744), (1, 196884), (2, 21493760), (3, 864299970)):
        if coeff(j, n) != want:
            fail(f"j-series coefficient at q^{n}")
    return j


# ----- per-level pipeline -----


def power_sums(j, ell, hi):
    """P_n(q) for n=1..ell: ell times the ell-divisible part of j(u)^n."""
    target = ell * hi  # u-precision; exponents of j(u)^n start at -n
    lo1, jc = j
    assert lo1 == -1
    jc = jc[: target + 2]
    sums = []
    cur = list(jc)  # j(u)^n, offset lo = -n
    for n in range(1, ell + 1):
        if n > 1:
            cur = packed_mul(cur, jc, target + n)
        qlo = -(n // ell) if n % ell == 0 else 0
        pc = []
        for m in range(qlo, hi):
            un = ell * m + n  # index of u^(ell*m) in cur (offset -n)
            pc.append(ell * cur[un] if 0 <= un < len(cur) else 0)
        sums.append(strip(qlo, pc))
    return sums


def newton_elementary(psums, ell, hi):
    """e'_0..e'_ell of the zeta-orbit conjugates from their power sums."""
    es = [(0, [1])]
    for i in range(1, ell + 1):
        acc = (0, [])
        for k in range(1, i + 1):
            term = series_mul(es[i - k], psums[k - 1], hi)
            acc = series_add(acc, term, 1 if k % 2 == 1 else -1)
        lo, c = acc
        if any(x % i for x in c):
            fail(f"newton identity divisibility at e'_{i}")
        es.append((lo, [x // i for x in c]))
    return es


def j_polynomial(series, jq_powers, check_hi):
    """Express series exactly as sum a_d * j(q)^d; abort on any remainder.

    Remainder coefficients are only certified below check_hi: multiplications
    capped at window top H lose one exponent of exactness per unit of pole in
    the other factor, so the extended window [check_hi, H) may hold garbage.
    """
    lo, c = series
    out = {}
    cur = series
    for d in range(max(0, -lo), -1, -1):
        a = coeff(cur, -d)
        if a:
            out[d] = a
            cur = series_add(cur, jq_powers[d], -a)
    clo, cc = cur
    for k, x in enumerate(cc):
        if x and clo + k < check_hi:
            fail(f"nonzero elimination remainder at q^{clo + k}")
    return out


def compute_level(j, ell):
    hi = MARGIN + ell + 3  # certified q-window top
    cap = hi + ell + 2  # extended top: muls lose pole-depth exactness here
    psums = power_sums(j, ell, cap)
    eprime = newton_elementary(psums, ell, cap)

    # j(q^ell) on the q-window: coefficient c_m of j lands on exponent ell*m.
    lo1, jc = j
    jql_lo = -ell
    dense = [0] * (cap - jql_lo)
    m = -1
    while ell * m < cap:
        if m + 1 < len(jc):
            dense[ell * m - jql_lo] = jc[m + 1]
        m += 1
    jql = strip(jql_lo, dense)

    # Elementary symmetric functions of all ell+1 conjugates.
    es = []
    for i in range(1, ell + 2):
        own = eprime[i] if i <= ell else (0, [])
        lifted = series_mul(jql, eprime[i - 1], cap)
        es.append(series_add(own, lifted))

    # Powers of j(q) on the window, for the greedy elimination.
    jq_powers = [(0, [1])]
    for d in range(1, ell + 2):
        jq_powers.append(series_mul(jq_powers[-1], j, cap))

    # Phi = X^{ell+1} + sum_i (-1)^i e_i X^{ell+1-i}.
    full = {(ell + 1, 0): 1}
    for i in range(1, ell + 2):
        signed = series_add((0, []), es[i - 1], 1 if i % 2 == 0 else -1)
        for d, a in j_polynomial(signed, jq_powers, hi).items():
            if a:
                full[(ell + 1 - i, d)] = a

    # Validations: symmetry, degrees, monic row, Kronecker congruence.
    for (u, v), a in full.items():
        if full.get((v, u)) != a:
            fail(f"symmetry at ({u},{v})")
        if u > ell + 1 or v > ell + 1:
            fail(f"degree overflow at ({u},{v})")
        if (u, v) == (ell + 1, ell + 1):
            fail("corner term present")
        if u == ell + 1 and v != 0:
            fail("not monic in X")
    kron = {(ell + 1, 0): 1, (0, ell + 1): 1, (ell, ell): -1, (1, 1): -1}
    allkeys = set(full) | set(kron)
    for key in allkeys:
        if (full.get(key, 0) - kron.get(key, 0)) % ell:
            fail(f"Kronecker congruence at {key}")
    return full


def emit(full, ell, outdir):
    lines = [f"ell {ell}"]
    for (u, v) in sorted((k for k in full if k[0] >= k[1]), reverse=True):
        lines.append(f"{u} {v} {full[(u, v)]}")
    path = Path(outdir) / f"phi_{ell}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def main():
    if len(sys.argv) < 2:
        raise SystemExit(__doc__)
    outdir = Path(sys.argv[1])
    outdir.mkdir(parents=True, exist_ok=True)
    levels = [int(x) for x in sys.argv[2:]] or [
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    ]
    top = max(levels)
    terms = top * (MARGIN + 2 * top + 5) + top + 2  # u-precision for the largest level
    sys.stderr.write(f"computing j(q) to {terms} terms\n")
    j = j_series(terms)
    for ell in levels:
        sys.stderr.write(f"level {ell}...\n")
        full = compute_level(j, ell)
        path = emit(full, ell, outdir)
        sys.stderr.write(f"  wrote {path} ({len(full)} stored terms)\n")


if __name__ == "__main__":
    main()
