#ifndef SEA_MODPOLY_HPP
#define SEA_MODPOLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "sea/integer.hpp"
#include "sea/poly.hpp"

namespace sea::modpoly {

// Classical modular polynomial Phi_ell as a symmetric term map: an entry
// {(i, j), c} with i >= j stands for c*(X^i Y^j + X^j Y^i) when i > j and
// for c*X^i Y^i when i = j.  Degree ell+1 in each variable, monic in X once
// Y is specialized, and Phi == (X^ell - Y)(X - Y^ell) mod ell.
struct ModularPolynomial {
    std::uint64_t ell = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Integer> terms;

    // Coefficient of X^i Y^j in the full (symmetrically closed) polynomial.
    const Integer& coefficient(std::uint32_t i, std::uint32_t j) const;
};

// Data directory resolution: explicit override (from the CLI flag), then the
// SEA_MODPOLY_DIR environment variable, then the compiled-in default.
void set_data_dir(const std::string& dir);  // empty string clears the override
std::string data_dir();

// Parse phi_<ell>.txt under dir and run the full validation battery.
// Throws data_not_found when the file is absent (naming ell and the path),
// corrupt_data naming the violated invariant, invalid_argument for ell = 2
// or other non-(odd prime) levels.
ModularPolynomial load_file(std::uint64_t ell, const std::string& dir);

// Read-through process-wide cache over load_file(ell, data_dir()).
const ModularPolynomial& load(std::uint64_t ell);

// Phi_ell(j, X) over F_p: always monic of degree exactly ell+1.
poly::FpPoly instantiate(const ModularPolynomial& phi, std::uint64_t j,
                         std::uint64_t p);

// Partial derivatives of Phi_ell evaluated at (j, jtilde) over F_p.
struct PartialValues {
    std::uint64_t phi_x = 0;
    std::uint64_t phi_y = 0;
    std::uint64_t phi_xx = 0;
    std::uint64_t phi_xy = 0;
    std::uint64_t phi_yy = 0;
};

PartialValues instantiate_partials(const ModularPolynomial& phi,
                                   std::uint64_t j, std::uint64_t jtilde,
                                   std::uint64_t p);

} // namespace sea::modpoly

#endif
