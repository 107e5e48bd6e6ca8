#pragma once

#include <cstdint>

#include "sea/curve.hpp"
#include "sea/poly.hpp"
#include "sea/prng.hpp"

namespace sea::elkies {

// Split type of an odd prime ell != p: Elkies when the Frobenius
// discriminant is a square mod ell, Atkin otherwise. ell | D (double
// eigenvalue) is merged into Elkies here; the stats module keeps the
// three-way classification where the distinction matters.
enum class PrimeClass { elkies, atkin };

// Decided from the modular polynomial alone: ell is Elkies iff
// Phi_ell(j(E), X) has a root in F_p. Deterministic; the rng parameter
// mirrors the other classifiers and is unused.
PrimeClass is_elkies(const curve::CurveOverFp& e, uint64_t ell, Prng& rng);

// Monic degree-(ell-1)/2 divisor of psi_ell vanishing exactly on the
// x-coordinates of the kernel of a rational ell-isogeny. jtilde is the
// j-invariant of the isogenous curve the construction chose.
struct KernelPolynomial {
    uint64_t ell;
    poly::FpPoly h;
    uint64_t jtilde;
};

KernelPolynomial kernel_polynomial(const curve::CurveOverFp& e, uint64_t ell, Prng& rng);

// Eigenvalue route to the trace: finds lambda in {1,...,ell-1} with
// (X^p, Y^p) = lambda * (X, Y) in F_p[X,Y]/(h, Y^2 - f_E) and returns
// t = lambda + p/lambda mod ell. Restarts on any modulus split; a search
// exhausted without an eigenvalue means the kernel polynomial is invalid.
uint64_t elkies_trace(const curve::CurveOverFp& e, uint64_t ell, const KernelPolynomial& kp);

}  // namespace sea::elkies
