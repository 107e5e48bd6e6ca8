#pragma once

#include <cstdint>
#include <set>

#include "sea/curve.hpp"
#include "sea/poly.hpp"

namespace sea::divpoly {

// psi vanishes exactly on the x-coordinates of the nonzero ell-torsion:
// deg psi = (ell^2 - 1)/2 with leading coefficient ell mod p.
struct DivisionPolynomial {
    uint64_t ell;
    poly::FpPoly psi;
};

DivisionPolynomial psi(const curve::CurveOverFp& e, uint64_t ell);

// x-coordinates of the rational points killed by ell, by exhaustive scan.
// Test oracle only, hence the small field budget.
std::set<uint64_t> torsion_scan_oracle(const curve::CurveOverFp& e, uint64_t ell);

}  // namespace sea::divpoly
