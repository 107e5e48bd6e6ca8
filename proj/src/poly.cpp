#include "sea/poly.hpp"

#include <algorithm>
#include <bit>

#include "sea/errors.hpp"
#include "sea/fp.hpp"

namespace sea::poly {

namespace {

thread_local uint64_t g_work_units = 0;

void require_same_modulus(const FpPoly& f, const FpPoly& g) {
    if (f.p != g.p) throw Error(ErrorKind::invalid_argument, "polynomial modulus mismatch");
}

std::vector<uint64_t> export_words(const mpz_class& z) {
    size_t count = 0;
    std::vector<uint64_t> words((mpz_sizeinbase(z.get_mpz_t(), 2) + 63) / 64 + 4, 0);
    mpz_export(words.data(), &count, -1, sizeof(uint64_t), 0, 0, z.get_mpz_t());
    return words;
}

}  // namespace

uint64_t work_counter() { return g_work_units; }
void reset_work_counter() { g_work_units = 0; }

FpPoly FpPoly::constant(uint64_t p, uint64_t v) {
    v %= p;
    return v ? FpPoly{p, {v}} : FpPoly{p, {}};
}

FpPoly FpPoly::monomial(uint64_t p, size_t deg, uint64_t coeff) {
    coeff %= p;
    if (!coeff) return zero(p);
    std::vector<uint64_t> c(deg + 1, 0);
    c[deg] = coeff;
    return FpPoly{p, std::move(c)};
}

FpPoly FpPoly::from_coeffs(uint64_t p, std::vector<uint64_t> coeffs) {
    for (auto& v : coeffs) v %= p;
    FpPoly f{p, std::move(coeffs)};
    f.normalize();
    return f;
}

void FpPoly::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

uint64_t FpPoly::eval(uint64_t x) const {
    uint64_t r = 0;
    for (size_t i = c.size(); i-- > 0;) r = fp::add(fp::mul(r, x, p), c[i], p);
    return r;
}

FpPoly add(const FpPoly& f, const FpPoly& g) {
    require_same_modulus(f, g);
    FpPoly r{f.p, {}};
    r.c.resize(std::max(f.c.size(), g.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = fp::add(f.coeff(i), g.coeff(i), f.p);
    r.normalize();
    return r;
}

FpPoly sub(const FpPoly& f, const FpPoly& g) {
    require_same_modulus(f, g);
    FpPoly r{f.p, {}};
    r.c.resize(std::max(f.c.size(), g.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = fp::sub(f.coeff(i), g.coeff(i), f.p);
    r.normalize();
    return r;
}

FpPoly neg(const FpPoly& f) {
    FpPoly r = f;
    for (auto& v : r.c) v = fp::neg(v, f.p);
    return r;
}

FpPoly mul_scalar(const FpPoly& f, uint64_t s) {
    s %= f.p;
    if (!s) return FpPoly::zero(f.p);
    FpPoly r = f;
    for (auto& v : r.c) v = fp::mul(v, s, f.p);
    return r;
}

FpPoly shift_up(const FpPoly& f, size_t k) {
    if (f.is_zero()) return f;
    FpPoly r{f.p, std::vector<uint64_t>(k, 0)};
    r.c.insert(r.c.end(), f.c.begin(), f.c.end());
    return r;
}

FpPoly trunc(const FpPoly& f, size_t k) {
    FpPoly r{f.p, {f.c.begin(), f.c.begin() + std::min(k, f.c.size())}};
    r.normalize();
    return r;
}

FpPoly derivative(const FpPoly& f) {
    FpPoly r{f.p, {}};
    for (size_t i = 1; i < f.c.size(); ++i) r.c.push_back(fp::mul(f.c[i], i % f.p, f.p));
    r.normalize();
    return r;
}

FpPoly monic(const FpPoly& f) {
    if (f.is_zero() || f.lead() == 1) return f;
    return mul_scalar(f, fp::inv(f.lead(), f.p));
}

namespace detail {

FpPoly mul_schoolbook(const FpPoly& f, const FpPoly& g) {
    FpPoly r{f.p, std::vector<uint64_t>(f.c.size() + g.c.size() - 1, 0)};
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (!f.c[i]) continue;
        for (size_t j = 0; j < g.c.size(); ++j)
            r.c[i + j] = fp::add(r.c[i + j], fp::mul(f.c[i], g.c[j], f.p), f.p);
    }
    r.normalize();
    return r;
}

// Kronecker substitution: pack coefficients at stride b, one big integer
// multiply, then unpack digits mod p. b is wide enough that product digits
// never carry into each other: each is < min_len * (p-1)^2 < 2^b.
FpPoly mul_kronecker(const FpPoly& f, const FpPoly& g) {
    const uint64_t p = f.p;
    const size_t min_len = std::min(f.c.size(), g.c.size());
    const unsigned bits_p = 64 - std::countl_zero(p);
    const unsigned b = 2 * bits_p + std::bit_width(min_len - 1);

    auto pack = [&](const std::vector<uint64_t>& c) {
        std::vector<uint64_t> words((c.size() * b + 63) / 64 + 1, 0);
        for (size_t i = 0; i < c.size(); ++i) {
            size_t off = i * b, w = off / 64, s = off % 64;
            words[w] |= c[i] << s;
            if (s) words[w + 1] |= c[i] >> (64 - s);
        }
        mpz_class z;
        mpz_import(z.get_mpz_t(), words.size(), -1, sizeof(uint64_t), 0, 0, words.data());
        return z;
    };

    mpz_class prod = pack(f.c) * pack(g.c);
    std::vector<uint64_t> words = export_words(prod);

    FpPoly r{p, std::vector<uint64_t>(f.c.size() + g.c.size() - 1, 0)};
    const size_t nw = (b + 63) / 64 + 1;  // words a digit can straddle
    uint64_t digit[4];
    for (size_t i = 0; i < r.c.size(); ++i) {
        size_t off = i * b, w = off / 64, s = off % 64;
        for (size_t j = 0; j < nw; ++j) {
            digit[j] = words[w + j] >> s;
            if (s) digit[j] |= words[w + j + 1] << (64 - s);
        }
        // Mask the top word down to b bits, then fold most-significant first.
        size_t top = (b - 1) / 64;
        digit[top] &= (b % 64) ? (~uint64_t{0} >> (64 - b % 64)) : ~uint64_t{0};
        uint64_t acc = 0;
        for (size_t j = top + 1; j-- > 0;)
            acc = static_cast<uint64_t>(((static_cast<unsigned __int128>(acc) << 64) | digit[j]) % p);
        r.c[i] = acc;
    }
    r.normalize();
    return r;
}

}  // namespace detail

FpPoly mul(const FpPoly& f, const FpPoly& g) {
    require_same_modulus(f, g);
    if (f.is_zero() || g.is_zero()) return FpPoly::zero(f.p);
    g_work_units += f.c.size() + g.c.size();
    if (std::min(f.degree(), g.degree()) < 32) return detail::mul_schoolbook(f, g);
    return detail::mul_kronecker(f, g);
}

std::pair<FpPoly, FpPoly> divrem(const FpPoly& f, const FpPoly& g) {
    require_same_modulus(f, g);
    if (g.is_zero()) throw Error(ErrorKind::invalid_argument, "polynomial division by zero");
    if (f.degree() < g.degree()) return {FpPoly::zero(f.p), f};
    const uint64_t p = f.p;
    const size_t dg = g.c.size() - 1;
    const uint64_t linv = fp::inv(g.lead(), p);
    std::vector<uint64_t> r = f.c;
    std::vector<uint64_t> q(f.c.size() - dg, 0);
    for (size_t k = q.size(); k-- > 0;) {
        uint64_t t = fp::mul(r[k + dg], linv, p);
        q[k] = t;
        if (t)
            for (size_t j = 0; j <= dg; ++j) r[k + j] = fp::sub(r[k + j], fp::mul(t, g.c[j], p), p);
    }
    r.resize(dg);
    FpPoly qr{p, std::move(q)}, rr{p, std::move(r)};
    qr.normalize();
    rr.normalize();
    return {std::move(qr), std::move(rr)};
}

FpPoly rem(const FpPoly& f, const FpPoly& g) { return divrem(f, g).second; }

FpPoly gcd(FpPoly f, FpPoly g) {
    require_same_modulus(f, g);
    while (!g.is_zero()) {
        FpPoly r = rem(f, g);
        f = std::move(g);
        g = std::move(r);
    }
    return monic(f);
}

FpPoly series_inv(const FpPoly& h, size_t k) {
    if (h.coeff(0) == 0) throw Error(ErrorKind::invalid_argument, "series inverse needs h(0) != 0");
    FpPoly g = FpPoly::constant(h.p, fp::inv(h.coeff(0), h.p));
    size_t t = 1;
    while (t < k) {
        t = std::min(2 * t, k);
        FpPoly e = sub(FpPoly::constant(h.p, 2), trunc(mul(trunc(h, t), g), t));
        g = trunc(mul(g, e), t);
    }
    return g;
}

InvResult modinv(const FpPoly& f, const FpPoly& m) {
    require_same_modulus(f, m);
    if (m.degree() < 1) throw Error(ErrorKind::invalid_argument, "modinv modulus must have degree >= 1");
    FpPoly a = rem(f, m);
    if (a.is_zero()) throw Error(ErrorKind::invalid_argument, "modinv of zero residue");
    // Extended Euclid tracking only the coefficient of f.
    FpPoly b = m;
    FpPoly s0 = FpPoly::one(f.p), s1 = FpPoly::zero(f.p);
    while (!b.is_zero()) {
        auto [q, r] = divrem(a, b);
        a = std::move(b);
        b = std::move(r);
        FpPoly s2 = sub(s0, mul(q, s1));
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (a.degree() == 0) return rem(mul_scalar(s0, fp::inv(a.lead(), f.p)), m);
    return SplitWitness{monic(a)};
}

RemContext::RemContext(FpPoly m) : m_(std::move(m)), rinv_(FpPoly::zero(m_.p)) {
    if (m_.degree() < 1)
        throw Error(ErrorKind::invalid_argument, "reduction modulus must have degree >= 1");
    ensure_precision(static_cast<size_t>(m_.degree()));
}

void RemContext::ensure_precision(size_t k) const {
    if (k <= prec_) return;
    FpPoly rev{m_.p, {m_.c.rbegin(), m_.c.rend()}};
    rinv_ = series_inv(rev, k);
    prec_ = k;
}

FpPoly RemContext::reduce(const FpPoly& f) const {
    if (f.degree() < m_.degree()) return f;
    const size_t n = static_cast<size_t>(f.degree());
    const size_t d = static_cast<size_t>(m_.degree());
    const size_t k = n - d + 1;
    ensure_precision(k);
    // rev_n(f) = rev(q) * rev(m) mod X^k, so one truncated multiply recovers q.
    FpPoly revf{f.p, {f.c.rbegin(), f.c.rend()}};
    FpPoly qrev = trunc(poly::mul(trunc(revf, k), trunc(rinv_, k)), k);
    std::reverse(qrev.c.begin(), qrev.c.end());
    qrev.c.insert(qrev.c.begin(), k - qrev.c.size(), 0);
    FpPoly q{f.p, std::move(qrev.c)};
    q.normalize();
    FpPoly r = sub(trunc(f, d), trunc(poly::mul(q, m_), d));
    return r;
}

FpPoly RemContext::mul(const FpPoly& f, const FpPoly& g) const {
    return reduce(poly::mul(f, g));
}

FpPoly modexp(const FpPoly& base, const Integer& e, const FpPoly& m) {
    return modexp(base, e, RemContext(m));
}

FpPoly modexp(const FpPoly& base, const Integer& e, const RemContext& ctx) {
    if (e < 0) throw Error(ErrorKind::invalid_argument, "modexp exponent must be >= 0");
    FpPoly r = FpPoly::one(base.p);
    if (e == 0) return r;
    FpPoly b = ctx.reduce(base);
    for (size_t i = mpz_sizeinbase(e.get_mpz_t(), 2); i-- > 0;) {
        r = ctx.mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = ctx.mul(r, b);
    }
    return r;
}

namespace {

// Rabin splitting on a monic squarefree product of linear factors.
void split_linear(const FpPoly& g, Prng& rng, std::set<uint64_t>& out) {
    const uint64_t p = g.p;
    if (g.degree() <= 0) return;
    if (g.degree() == 1) {
        out.insert(fp::mul(fp::neg(g.c[0], p), fp::inv(g.c[1], p), p));
        return;
    }
    const Integer half = (Integer(from_u64(p)) - 1) / 2;
    for (int attempt = 0; attempt < 64; ++attempt) {
        uint64_t u = rng.below(p);
        // (X+u)^((p-1)/2) - 1 vanishes exactly on roots r with r+u a nonzero square.
        FpPoly s = modexp(FpPoly{p, {u, 1}}, half, g);
        s = sub(s, FpPoly::one(p));
        FpPoly w = gcd(s, g);
        if (w.degree() > 0 && w.degree() < g.degree()) {
            split_linear(w, rng, out);
            split_linear(divrem(g, w).first, rng, out);
            return;
        }
    }
    throw Error(ErrorKind::retry_exhausted, "root splitting made no progress after 64 attempts");
}

}  // namespace

std::set<uint64_t> roots_in_fp(const FpPoly& f, Prng& rng) {
    if (f.is_zero()) throw Error(ErrorKind::invalid_argument, "roots of the zero polynomial");
    std::set<uint64_t> out;
    if (f.degree() == 0) return out;
    const uint64_t p = f.p;
    // gcd(X^p - X, f) collects each distinct F_p-root exactly once.
    FpPoly xp = modexp(FpPoly::x(p), Integer(from_u64(p)), f);
    FpPoly g = gcd(sub(xp, FpPoly::x(p)), f);
    split_linear(g, rng, out);
    return out;
}

}  // namespace sea::poly
