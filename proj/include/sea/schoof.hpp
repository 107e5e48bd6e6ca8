#pragma once

#include <cstdint>
#include <memory>
#include <variant>

#include "sea/curve.hpp"
#include "sea/poly.hpp"
#include "sea/prng.hpp"

namespace sea::schoof {

// Shared arithmetic context for F_p[X,Y]/(h(X), Y^2 - f_E(X)): the curve,
// the working modulus h (a monic divisor of psi_ell), and its reduction
// context.
class TorsionRing {
public:
    TorsionRing(curve::CurveOverFp e, poly::FpPoly h);
    const curve::CurveOverFp& curve() const { return e_; }
    const poly::FpPoly& modulus() const { return ctx_.modulus(); }
    // x^3 + ax + b reduced mod h.
    const poly::FpPoly& cubic() const { return cubic_; }
    const poly::RemContext& ctx() const { return ctx_; }

private:
    curve::CurveOverFp e_;
    poly::RemContext ctx_;
    poly::FpPoly cubic_;
};

using Ring = std::shared_ptr<const TorsionRing>;

// Endomorphism restricted to the torsion points cut out by the modulus,
// written (alpha(X), beta(X) * Y), or the explicit zero map.
struct TorsionEndomorphism {
    Ring ring;
    bool zero = true;
    poly::FpPoly alpha;
    poly::FpPoly beta;

    static TorsionEndomorphism zero_endo(Ring ring);
    static TorsionEndomorphism make(Ring ring, poly::FpPoly alpha, poly::FpPoly beta);
    static TorsionEndomorphism identity(Ring ring);
    bool is_zero() const { return zero; }
};

// A zero divisor surfaced mid-computation: a proper monic factor of the
// working modulus. The caller restarts on it (or its cofactor).
struct ModulusSplit {
    poly::FpPoly factor;
};

using EndoResult = std::variant<TorsionEndomorphism, ModulusSplit>;

TorsionEndomorphism endo_negate(const TorsionEndomorphism& u);
EndoResult endo_add(const TorsionEndomorphism& u, const TorsionEndomorphism& v);
EndoResult endo_scalar_mul(uint64_t k, const TorsionEndomorphism& u);

// (X^p, f_E^{(p-1)/2} Y) and its square (X^{p^2}, f_E^{(p^2-1)/2} Y), both
// by direct exponentiation mod the ring.
TorsionEndomorphism frobenius(const Ring& ring);
TorsionEndomorphism frobenius_squared(const Ring& ring);

// Evaluation bridge for tests: apply u to a rational torsion point.
curve::Point endo_eval_oracle(const TorsionEndomorphism& u, const curve::Point& q);

// t mod ell via the characteristic equation pi^2 - t*pi + p = 0 on the
// ell-torsion: computes w = pi^2 + [p mod ell] and searches m with
// m*pi = +-w, restarting on any modulus split.
uint64_t trace_mod_ell(const curve::CurveOverFp& e, uint64_t ell, Prng& rng);

// Full trace: residues for odd primes ell (skipping p) until the modulus
// product M satisfies M^2 > 16p, then a balanced CRT lift.
curve::TraceCertificate schoof_trace(const curve::CurveOverFp& e, Prng& rng);

namespace detail {
// Search with an explicit starting modulus; exposed so tests can verify
// that proper factors of psi_ell give the same residue.
uint64_t trace_search(const curve::CurveOverFp& e, uint64_t ell, poly::FpPoly h);
}  // namespace detail

}  // namespace sea::schoof
