#include "sea/elkies.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sea/arith.hpp"
#include "sea/divpoly.hpp"
#include "sea/errors.hpp"
#include "sea/fp.hpp"
#include "sea/modpoly.hpp"
#include "sea/schoof.hpp"

namespace sea::elkies {
namespace {

/// Isogenous-curve data read off the modular equation at (j, jtilde):
// coefficients of the image curve in the normalization that fixes the
// invariant differential, and p1 = sum of the kernel x-coordinates.
struct IsogenousData {
    uint64_t atilde;
    uint64_t btilde;
    uint64_t p1;
};

// Eisenstein bookkeeping in the convention E4 = -a/3, E6 = -b/2, so that
// j = E4^3/Delta and q dj/dq = -j E6/E4. Differentiating Phi(j(q), j(q^ell))
// twice in q d/dq gives first the isogenous j-derivative and then the
// weight-2 difference E2(q) - ell E2(q^ell), whose value determines p1.
// Returns nullopt when a needed denominator vanishes (double root of the
// instantiated polynomial, or jtilde in {0, 1728}).
std::optional<IsogenousData> isogenous_curve(const curve::CurveOverFp& e, uint64_t ell,
                                             uint64_t j, uint64_t jt,
                                             const modpoly::ModularPolynomial& phi) {
    const uint64_t p = e.p;
    const uint64_t c1728 = 1728 % p;
    if (jt == 0 || jt == c1728) return std::nullopt;
    const auto pv = modpoly::instantiate_partials(phi, j, jt, p);
    if (pv.phi_x == 0 || pv.phi_y == 0) return std::nullopt;

    const uint64_t ellp = ell % p;
    const uint64_t e4 = fp::mul(fp::neg(e.a, p), fp::inv(3, p), p);
    const uint64_t e6 = fp::mul(fp::neg(e.b, p), fp::inv(2, p), p);
    // dj = q dj/dq at q; djt = q d/dq of j(q^ell); jlp = (q dj/dq)(q^ell).
    const uint64_t dj = fp::neg(fp::mul(j, fp::mul(e6, fp::inv(e4, p), p), p), p);
    const uint64_t djt =
        fp::neg(fp::mul(dj, fp::mul(pv.phi_x, fp::inv(pv.phi_y, p), p), p), p);
    const uint64_t jlp = fp::mul(djt, fp::inv(ellp, p), p);
    const uint64_t jt1728 = fp::sub(jt, c1728, p);

    // E4, E6 at q^ell from jlp^2/(jt(jt-1728)) and -jlp^3/(jt^2(jt-1728)).
    const uint64_t den = fp::inv(fp::mul(jt, jt1728, p), p);
    const uint64_t et4 = fp::mul(fp::mul(jlp, jlp, p), den, p);
    const uint64_t et6 = fp::neg(
        fp::mul(fp::mul(fp::mul(jlp, jlp, p), jlp, p), fp::mul(den, fp::inv(jt, p), p), p), p);

    const uint64_t ell2 = fp::mul(ellp, ellp, p);
    const uint64_t ell4 = fp::mul(ell2, ell2, p);
    const uint64_t ell6 = fp::mul(ell4, ell2, p);
    const uint64_t atilde = fp::neg(fp::mul(3, fp::mul(ell4, et4, p), p), p);
    const uint64_t btilde = fp::neg(fp::mul(2, fp::mul(ell6, et6, p), p), p);

    // E2(q) - ell E2(q^ell) via the second logarithmic derivative of the
    // modular relation; the ratios E6/E4 and E4^2/E6 at q^ell reduce to
    // -jlp/jt and -jlp/(jt-1728).
    const uint64_t dj2 = fp::mul(dj, dj, p);
    const uint64_t djt2 = fp::mul(djt, djt, p);
    uint64_t num = fp::mul(pv.phi_xx, dj2, p);
    num = fp::add(num, fp::mul(2, fp::mul(pv.phi_xy, fp::mul(dj, djt, p), p), p), p);
    num = fp::add(num, fp::mul(pv.phi_yy, djt2, p), p);
    const uint64_t t1 =
        fp::neg(fp::mul(6, fp::mul(num, fp::inv(fp::mul(pv.phi_x, dj, p), p), p), p), p);
    const uint64_t t2 = fp::mul(
        4, fp::add(fp::mul(e6, fp::inv(e4, p), p), fp::mul(djt, fp::inv(jt, p), p), p), p);
    const uint64_t t3 =
        fp::mul(3, fp::add(fp::mul(fp::mul(e4, e4, p), fp::inv(e6, p), p),
                           fp::mul(djt, fp::inv(jt1728, p), p), p),
                p);
    const uint64_t e2s = fp::add(fp::add(t1, t2, p), t3, p);
    const uint64_t p1 = fp::neg(fp::mul(ellp, fp::mul(e2s, fp::inv(2, p), p), p), p);
    return IsogenousData{atilde, btilde, p1};
}

// Laurent coefficients of the Weierstrass function of y^2 = x^3 + ax + b:
// p(z) = z^-2 + sum_{k>=1} c_k z^{2k} with c_1 = -a/5, c_2 = -b/7 and the
// convolution recurrence. Returns c[1..n].
std::vector<uint64_t> weierstrass_coeffs(uint64_t a, uint64_t b, uint64_t p, size_t n) {
    std::vector<uint64_t> c(n + 1, 0);
    if (n >= 1) c[1] = fp::mul(fp::neg(a, p), fp::inv(5, p), p);
    if (n >= 2) c[2] = fp::mul(fp::neg(b, p), fp::inv(7, p), p);
    for (size_t k = 3; k <= n; ++k) {
        uint64_t s = 0;
        for (size_t h = 1; h + 2 <= k; ++h) s = fp::add(s, fp::mul(c[h], c[k - 1 - h], p), p);
        c[k] = fp::mul(s, fp::mul(3, fp::inv(((k - 2) * (2 * k + 3)) % p, p), p), p);
    }
    return c;
}

// Kernel polynomial from the isogenous-curve data. With w = z^2 and
// S(w) = z^2 p(z), the function z^{ell-1} h(p(z)) equals exp(A) where
// A(w) = -p1 w + sum_k (ell c_k - ct_k) w^{k+1} / ((2k+1)(2k+2)), so the
// power sums of the kernel roots solve the triangular system
// sum_m (p_m/m) (w/S)^m = d log S - A, and Newton's identities finish.
poly::FpPoly analytic_kernel(const curve::CurveOverFp& e, uint64_t ell,
                             const IsogenousData& iso) {
    const uint64_t p = e.p;
    const size_t d = (ell - 1) / 2;
    const auto c = weierstrass_coeffs(e.a, e.b, p, d - 1);
    const auto ct = weierstrass_coeffs(iso.atilde, iso.btilde, p, d - 1);

    std::vector<uint64_t> sc(d + 1, 0), ac(d + 1, 0);
    sc[0] = 1;
    ac[1] = fp::neg(iso.p1, p);
    for (size_t k = 1; k + 1 <= d; ++k) {
        sc[k + 1] = c[k];
        const uint64_t diff = fp::sub(fp::mul(ell % p, c[k], p), ct[k], p);
        ac[k + 1] = fp::mul(diff, fp::inv(((2 * k + 1) * (2 * k + 2)) % p, p), p);
    }
    const poly::FpPoly S = poly::FpPoly::from_coeffs(p, sc);
    const poly::FpPoly A = poly::FpPoly::from_coeffs(p, ac);

    const poly::FpPoly sinv = poly::series_inv(S, d + 1);
    const poly::FpPoly T = poly::trunc(poly::mul(poly::derivative(S), sinv), d);
    std::vector<uint64_t> lg(d + 1, 0);
    for (size_t m = 1; m <= d; ++m) lg[m] = fp::mul(T.coeff(m - 1), fp::inv(m, p), p);
    const poly::FpPoly G =
        poly::sub(poly::mul_scalar(poly::FpPoly::from_coeffs(p, lg), d % p), A);

    const poly::FpPoly U = poly::trunc(poly::shift_up(sinv, 1), d + 1);
    poly::FpPoly upow = U;
    poly::FpPoly r = G;
    std::vector<uint64_t> ps(d + 1, 0);
    for (size_t m = 1; m <= d; ++m) {
        const uint64_t qm = r.coeff(m);
        ps[m] = fp::mul(qm, m, p);
        if (m < d) {
            r = poly::sub(r, poly::mul_scalar(upow, qm));
            upow = poly::trunc(poly::mul(upow, U), d + 1);
        }
    }

    std::vector<uint64_t> el(d + 1, 0);
    el[0] = 1;
    for (size_t i = 1; i <= d; ++i) {
        uint64_t s = 0;
        for (size_t k = 1; k <= i; ++k) {
            const uint64_t term = fp::mul(ps[k], el[i - k], p);
            s = (k % 2 == 1) ? fp::add(s, term, p) : fp::sub(s, term, p);
        }
        el[i] = fp::mul(s, fp::inv(i, p), p);
    }
    std::vector<uint64_t> hc(d + 1, 0);
    for (size_t i = 0; i <= d; ++i) hc[d - i] = (i % 2 == 0) ? el[i] : fp::neg(el[i], p);
    return poly::FpPoly::from_coeffs(p, hc);
}

// Kernel recovery when the modular-equation route degenerates: a rational
// abscissa x0 of psi_ell spans a Galois-stable order-ell subgroup (Frobenius
// can only send (x0, y) to +-(x0, y)), and every multiple's abscissa is
// again rational. Points are walked as (x, t) for (x, t*Y) with Y^2 = f(x0),
// keeping all arithmetic in F_p.
std::optional<KernelPolynomial> torsion_kernel(const curve::CurveOverFp& e, uint64_t ell,
                                               Prng& rng) {
    const uint64_t p = e.p;
    const size_t d = (ell - 1) / 2;
    const auto dp = divpoly::psi(e, ell);
    const std::set<uint64_t> roots = poly::roots_in_fp(dp.psi, rng);
    for (uint64_t x0 : roots) {
        const uint64_t f0 = e.f_eval(x0);
        if (f0 == 0) continue;  // a 2-torsion abscissa cannot satisfy psi_ell
        std::vector<uint64_t> xs{x0};
        uint64_t xc = x0, tc = 1;
        for (size_t i = 2; i <= d; ++i) {
            // Add Q to (xc, tc*Y): tangent for the double, chord after; the
            // slope is lam*Y, and i <= d < ell keeps every denominator alive.
            uint64_t lam;
            if (i == 2) {
                const uint64_t numr = fp::add(fp::mul(3, fp::mul(x0, x0, p), p), e.a, p);
                lam = fp::mul(numr, fp::inv(fp::mul(2, f0, p), p), p);
            } else {
                lam = fp::mul(fp::sub(tc, 1, p), fp::inv(fp::sub(xc, x0, p), p), p);
            }
            const uint64_t xn =
                fp::sub(fp::sub(fp::mul(fp::mul(lam, lam, p), f0, p), xc, p), x0, p);
            const uint64_t tn = fp::sub(fp::mul(lam, fp::sub(xc, xn, p), p), tc, p);
            xc = xn;
            tc = tn;
            xs.push_back(xc);
        }
        poly::FpPoly h = poly::FpPoly::one(p);
        uint64_t ps1 = 0, ps2 = 0, ps3 = 0;
        for (uint64_t x : xs) {
            h = poly::mul(h, poly::FpPoly::from_coeffs(p, {fp::neg(x, p), 1}));
            const uint64_t x2 = fp::mul(x, x, p);
            ps1 = fp::add(ps1, x, p);
            ps2 = fp::add(ps2, x2, p);
            ps3 = fp::add(ps3, fp::mul(x2, x, p), p);
        }
        // Velu coefficients of the image curve, summed over the 2d kernel
        // points (each abscissa twice): a' = a - 5t, b' = b - 7w.
        const uint64_t dm = d % p;
        const uint64_t tv = fp::add(fp::mul(6, ps2, p), fp::mul(2, fp::mul(dm, e.a, p), p), p);
        const uint64_t wv =
            fp::add(fp::add(fp::mul(10, ps3, p), fp::mul(6, fp::mul(e.a, ps1, p), p), p),
                    fp::mul(4, fp::mul(dm, e.b, p), p), p);
        const uint64_t at = fp::sub(e.a, fp::mul(5, tv, p), p);
        const uint64_t bt = fp::sub(e.b, fp::mul(7, wv, p), p);
        const uint64_t jt = curve::j_invariant(curve::CurveOverFp(p, at, bt));
        return KernelPolynomial{ell, h, jt};
    }
    return std::nullopt;
}

}  // namespace

PrimeClass is_elkies(const curve::CurveOverFp& e, uint64_t ell, Prng& rng) {
    (void)rng;
    if (ell == e.p)
        throw Error(ErrorKind::invalid_argument, "is_elkies requires ell != p");
    const auto& phi = modpoly::load(ell);
    const poly::FpPoly f = modpoly::instantiate(phi, curve::j_invariant(e), e.p);
    const poly::RemContext ctx(f);
    const poly::FpPoly xp = poly::modexp(poly::FpPoly::x(e.p), Integer(e.p), ctx);
    const poly::FpPoly g = poly::gcd(poly::sub(xp, poly::FpPoly::x(e.p)), f);
    return g.degree() >= 1 ? PrimeClass::elkies : PrimeClass::atkin;
}

KernelPolynomial kernel_polynomial(const curve::CurveOverFp& e, uint64_t ell, Prng& rng) {
    const uint64_t p = e.p;
    if (ell == p)
        throw Error(ErrorKind::invalid_argument, "kernel_polynomial requires ell != p");
    const uint64_t j = curve::j_invariant(e);
    if (j == 0 || j == 1728 % p)
        throw Error(ErrorKind::invalid_argument,
                    "kernel_polynomial requires j(E) outside {0, 1728}");
    const auto& phi = modpoly::load(ell);
    const poly::FpPoly f = modpoly::instantiate(phi, j, p);
    const std::set<uint64_t> roots = poly::roots_in_fp(f, rng);
    if (roots.empty())
        throw Error(ErrorKind::invalid_argument,
                    "ell=" + std::to_string(ell) + " is not an Elkies prime for this curve");
    // Ascending root order makes the choice deterministic; p > ell + 2
    // keeps every integer the series construction divides by invertible.
    if (p > ell + 2) {
        for (uint64_t jt : roots) {
            const auto iso = isogenous_curve(e, ell, j, jt, phi);
            if (!iso) continue;
            return KernelPolynomial{ell, analytic_kernel(e, ell, *iso), jt};
        }
    }
    if (auto kp = torsion_kernel(e, ell, rng)) return *kp;
    throw Error(ErrorKind::degenerate_isogeny,
                "degenerate isogeny configuration at ell=" + std::to_string(ell) +
                    "; fall back to schoof for this ell");
}

uint64_t elkies_trace(const curve::CurveOverFp& e, uint64_t ell, const KernelPolynomial& kp) {
    const uint64_t p = e.p;
    if (ell == 2 || ell == p || !arith::is_prime(Integer(ell)))
        throw Error(ErrorKind::invalid_argument, "elkies_trace requires an odd prime ell != p");
    if (kp.ell != ell || kp.h.degree() < 1)
        throw Error(ErrorKind::invalid_argument, "kernel polynomial does not match ell");
    poly::FpPoly h = poly::monic(kp.h);
    for (;;) {
        auto ring = std::make_shared<const schoof::TorsionRing>(e, h);
        const auto pi = schoof::frobenius(ring);
        const auto one = schoof::TorsionEndomorphism::identity(ring);
        std::optional<uint64_t> lambda;
        std::optional<poly::FpPoly> split;
        auto acc = one;
        for (uint64_t m = 1; 2 * m <= ell - 1; ++m) {
            if (m > 1) {
                auto r = schoof::endo_add(acc, one);
                if (auto* s = std::get_if<schoof::ModulusSplit>(&r)) {
                    split = s->factor;
                    break;
                }
                acc = std::get<schoof::TorsionEndomorphism>(std::move(r));
            }
            if (acc.is_zero())
                throw Error(ErrorKind::internal,
                            "kernel point killed by m < ell: kernel polynomial invalid");
            if (acc.alpha != pi.alpha) continue;
            const poly::FpPoly diff = poly::sub(pi.beta, acc.beta);
            if (diff.is_zero()) {
                lambda = m;
                break;
            }
            const poly::FpPoly sum = poly::add(pi.beta, acc.beta);
            if (sum.is_zero()) {
                lambda = ell - m;
                break;
            }
            // Mixed ordinate signs across components: both gcds are proper.
            poly::FpPoly g = poly::gcd(diff, h);
            if (g.degree() < 1 || g.degree() >= h.degree()) g = poly::gcd(sum, h);
            if (g.degree() < 1 || g.degree() >= h.degree())
                throw Error(ErrorKind::internal,
                            "frobenius ordinate is not +-m on the kernel: kernel polynomial "
                            "invalid");
            split = g;
            break;
        }
        if (split) {
            h = poly::monic(*split);
            continue;
        }
        if (!lambda)
            throw Error(ErrorKind::internal,
                        "no frobenius eigenvalue on the kernel: kernel polynomial invalid");
        const uint64_t pl = p % ell;
        return fp::add(*lambda, fp::mul(pl, fp::inv(*lambda, ell), ell), ell);
    }
}

}  // namespace sea::elkies
