#include "sea/schoof.hpp"

#include "sea/arith.hpp"
#include "sea/divpoly.hpp"
#include "sea/errors.hpp"
#include "sea/fp.hpp"

namespace sea::schoof {

using poly::FpPoly;

TorsionRing::TorsionRing(curve::CurveOverFp e, poly::FpPoly h)
    : e_(e), ctx_(poly::monic(std::move(h))), cubic_(ctx_.reduce(FpPoly::from_coeffs(e.p, {e.b, e.a, 0, 1}))) {}

TorsionEndomorphism TorsionEndomorphism::zero_endo(Ring ring) {
    return TorsionEndomorphism{std::move(ring), true, {}, {}};
}

TorsionEndomorphism TorsionEndomorphism::make(Ring ring, FpPoly alpha, FpPoly beta) {
    alpha = ring->ctx().reduce(alpha);
    beta = ring->ctx().reduce(beta);
    return TorsionEndomorphism{std::move(ring), false, std::move(alpha), std::move(beta)};
}

TorsionEndomorphism TorsionEndomorphism::identity(Ring ring) {
    const uint64_t p = ring->curve().p;
    return make(std::move(ring), FpPoly::x(p), FpPoly::one(p));
}

namespace {

void require_same_ring(const TorsionEndomorphism& u, const TorsionEndomorphism& v) {
    if (u.ring == v.ring) return;
    const auto &a = *u.ring, &b = *v.ring;
    if (a.modulus() == b.modulus() && a.curve().p == b.curve().p && a.curve().a == b.curve().a &&
        a.curve().b == b.curve().b)
        return;
    throw Error(ErrorKind::invalid_argument, "endomorphism ring mismatch");
}

}  // namespace

TorsionEndomorphism endo_negate(const TorsionEndomorphism& u) {
    if (u.zero) return u;
    return TorsionEndomorphism{u.ring, false, u.alpha, poly::neg(u.beta)};
}

EndoResult endo_add(const TorsionEndomorphism& u, const TorsionEndomorphism& v) {
    require_same_ring(u, v);
    if (u.zero) return v;
    if (v.zero) return u;
    const TorsionRing& ring = *u.ring;
    const poly::RemContext& ctx = ring.ctx();
    const uint64_t p = ring.curve().p;
    const FpPoly& f = ring.cubic();

    FpPoly slope;  // the Y-free part: actual slope is slope(X) * Y
    if (u.alpha == v.alpha) {
        if (poly::add(u.beta, v.beta).is_zero()) return TorsionEndomorphism::zero_endo(u.ring);
        if (u.beta != v.beta) {
            // Mixed signs across the roots of the modulus: the agreement
            // locus is a proper factor.
            return ModulusSplit{poly::gcd(poly::sub(u.beta, v.beta), ring.modulus())};
        }
        // Tangent: lambda = (3a^2+A)/(2bY) = (3a^2+A) Y / (2bF).
        FpPoly num = poly::add(poly::mul_scalar(ctx.mul(u.alpha, u.alpha), 3 % p),
                               FpPoly::constant(p, ring.curve().a));
        FpPoly den = ctx.mul(poly::mul_scalar(u.beta, 2), f);
        auto inv = poly::modinv(den, ring.modulus());
        if (auto* w = std::get_if<poly::SplitWitness>(&inv)) return ModulusSplit{w->factor};
        slope = ctx.mul(num, std::get<FpPoly>(inv));
    } else {
        auto inv = poly::modinv(poly::sub(v.alpha, u.alpha), ring.modulus());
        if (auto* w = std::get_if<poly::SplitWitness>(&inv)) return ModulusSplit{w->factor};
        slope = ctx.mul(poly::sub(v.beta, u.beta), std::get<FpPoly>(inv));
    }
    // x3 = F*slope^2 - x1 - x2, beta3 = slope*(x1 - x3) - beta1.
    FpPoly x3 = poly::sub(poly::sub(ctx.mul(f, ctx.mul(slope, slope)), u.alpha), v.alpha);
    FpPoly b3 = poly::sub(ctx.mul(slope, poly::sub(u.alpha, x3)), u.beta);
    return TorsionEndomorphism{u.ring, false, std::move(x3), std::move(b3)};
}

EndoResult endo_scalar_mul(uint64_t k, const TorsionEndomorphism& u) {
    TorsionEndomorphism acc = TorsionEndomorphism::zero_endo(u.ring);
    for (int i = 63; i >= 0; --i) {
        if (!acc.zero) {
            EndoResult r = endo_add(acc, acc);
            if (std::holds_alternative<ModulusSplit>(r)) return r;
            acc = std::get<TorsionEndomorphism>(std::move(r));
        }
        if ((k >> i) & 1) {
            EndoResult r = endo_add(acc, u);
            if (std::holds_alternative<ModulusSplit>(r)) return r;
            acc = std::get<TorsionEndomorphism>(std::move(r));
        }
    }
    return acc;
}

TorsionEndomorphism frobenius(const Ring& ring) {
    const uint64_t p = ring->curve().p;
    const curve::CurveOverFp& e = ring->curve();
    FpPoly f = FpPoly::from_coeffs(p, {e.b, e.a, 0, 1});
    FpPoly alpha = poly::modexp(FpPoly::x(p), from_u64(p), ring->ctx());
    FpPoly beta = poly::modexp(f, (from_u64(p) - 1) / 2, ring->ctx());
    return TorsionEndomorphism{ring, false, std::move(alpha), std::move(beta)};
}

TorsionEndomorphism frobenius_squared(const Ring& ring) {
    const uint64_t p = ring->curve().p;
    const curve::CurveOverFp& e = ring->curve();
    Integer p2 = from_u64(p) * from_u64(p);
    FpPoly f = FpPoly::from_coeffs(p, {e.b, e.a, 0, 1});
    FpPoly alpha = poly::modexp(FpPoly::x(p), p2, ring->ctx());
    FpPoly beta = poly::modexp(f, (p2 - 1) / 2, ring->ctx());
    return TorsionEndomorphism{ring, false, std::move(alpha), std::move(beta)};
}

curve::Point endo_eval_oracle(const TorsionEndomorphism& u, const curve::Point& q) {
    const curve::CurveOverFp& e = u.ring->curve();
    if (q.infinity || !curve::on_curve(e, q))
        throw Error(ErrorKind::invalid_argument, "oracle needs an affine rational point");
    if (u.ring->modulus().eval(q.x) != 0)
        throw Error(ErrorKind::invalid_argument, "point x-coordinate is not a root of the modulus");
    if (u.zero) return curve::Point::at_infinity();
    return curve::Point::affine(u.alpha.eval(q.x), fp::mul(u.beta.eval(q.x), q.y, e.p));
}

namespace {

// Control-flow form of ModulusSplit for the restart loop.
struct SplitFound {
    FpPoly factor;
};

TorsionEndomorphism unwrap(EndoResult&& r) {
    if (auto* s = std::get_if<ModulusSplit>(&r)) throw SplitFound{std::move(s->factor)};
    return std::get<TorsionEndomorphism>(std::move(r));
}

}  // namespace

namespace detail {

uint64_t trace_search(const curve::CurveOverFp& e, uint64_t ell, FpPoly h) {
    for (;;) {
        try {
            Ring ring = std::make_shared<TorsionRing>(e, h);
            TorsionEndomorphism pi = frobenius(ring);
            TorsionEndomorphism pi2 = frobenius_squared(ring);
            TorsionEndomorphism pl =
                unwrap(endo_scalar_mul(e.p % ell, TorsionEndomorphism::identity(ring)));
            TorsionEndomorphism w = unwrap(endo_add(pi2, pl));
            if (w.is_zero()) return 0;
            TorsionEndomorphism mpi = pi;
            for (uint64_t m = 1; 2 * m <= ell - 1; ++m) {
                if (mpi.is_zero())
                    throw Error(ErrorKind::internal, "frobenius multiple degenerated to zero");
                if (mpi.alpha == w.alpha) {
                    if (mpi.beta == w.beta) return m;
                    if (poly::add(mpi.beta, w.beta).is_zero()) return ell - m;
                    throw SplitFound{poly::gcd(poly::sub(mpi.beta, w.beta), ring->modulus())};
                }
                if (2 * (m + 1) <= ell - 1) mpi = unwrap(endo_add(mpi, pi));
            }
            throw Error(ErrorKind::internal, "trace search exhausted without a match");
        } catch (SplitFound& s) {
            // Either factor works; the smaller one makes the restart cheaper.
            FpPoly cof = poly::divrem(poly::monic(h), s.factor).first;
            h = (cof.degree() >= 1 && cof.degree() < s.factor.degree()) ? std::move(cof)
                                                                        : std::move(s.factor);
        }
    }
}

}  // namespace detail

uint64_t trace_mod_ell(const curve::CurveOverFp& e, uint64_t ell, Prng& rng) {
    (void)rng;
    return detail::trace_search(e, ell, divpoly::psi(e, ell).psi);
}

curve::TraceCertificate schoof_trace(const curve::CurveOverFp& e, Prng& rng) {
    arith::ResidueSystem rs;
    Integer prod = 1;
    const Integer bound = 16 * from_u64(e.p);
    for (uint64_t ell = 3; prod * prod <= bound; ell = to_u64(arith::next_prime(from_u64(ell)))) {
        if (ell == e.p) continue;
        uint64_t r = trace_mod_ell(e, ell, rng);
        rs.entries.emplace_back(from_u64(ell), from_u64(r));
        prod *= from_u64(ell);
    }
    Integer t = arith::crt_balanced(rs);
    return curve::TraceCertificate::from_trace(e.p, t, curve::Method::schoof, std::move(rs));
}

}  // namespace sea::schoof
