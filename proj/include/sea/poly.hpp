#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "sea/integer.hpp"
#include "sea/prng.hpp"

namespace sea::poly {

// Dense polynomial over F_p, coefficients lowest-degree first, no trailing
// zeros (zero polynomial = empty vector). Modulus must be an odd prime > 3
// fitting in 64 bits; callers are trusted on primality.
struct FpPoly {
    uint64_t p = 0;
    std::vector<uint64_t> c;

    static FpPoly zero(uint64_t p) { return FpPoly{p, {}}; }
    static FpPoly one(uint64_t p) { return FpPoly{p, {1}}; }
    static FpPoly x(uint64_t p) { return FpPoly{p, {0, 1}}; }
    static FpPoly constant(uint64_t p, uint64_t v);
    static FpPoly monomial(uint64_t p, size_t deg, uint64_t coeff);
    // Reduces each entry mod p, then strips trailing zeros.
    static FpPoly from_coeffs(uint64_t p, std::vector<uint64_t> coeffs);

    bool is_zero() const { return c.empty(); }
    // Degree of the zero polynomial is -1 by convention.
    long degree() const { return static_cast<long>(c.size()) - 1; }
    uint64_t lead() const { return c.empty() ? 0 : c.back(); }
    uint64_t coeff(size_t i) const { return i < c.size() ? c[i] : 0; }
    void normalize();

    uint64_t eval(uint64_t x) const;

    friend bool operator==(const FpPoly&, const FpPoly&) = default;
};

// Thread-local multiplication meter: every mul() charges len(f)+len(g) units.
// Consumed by the point-counting driver to bound fallback work.
uint64_t work_counter();
void reset_work_counter();

FpPoly add(const FpPoly& f, const FpPoly& g);
FpPoly sub(const FpPoly& f, const FpPoly& g);
FpPoly neg(const FpPoly& f);
FpPoly mul(const FpPoly& f, const FpPoly& g);
FpPoly mul_scalar(const FpPoly& f, uint64_t s);
// f * X^k.
FpPoly shift_up(const FpPoly& f, size_t k);
// f mod X^k.
FpPoly trunc(const FpPoly& f, size_t k);
FpPoly derivative(const FpPoly& f);
FpPoly monic(const FpPoly& f);

std::pair<FpPoly, FpPoly> divrem(const FpPoly& f, const FpPoly& g);
FpPoly rem(const FpPoly& f, const FpPoly& g);
// Monic gcd; gcd(f, 0) is the monic normalization of f.
FpPoly gcd(FpPoly f, FpPoly g);

// Inverse of h modulo X^k (requires h(0) != 0).
FpPoly series_inv(const FpPoly& h, size_t k);

// Proper factor of a modulus discovered during an inversion attempt.
struct SplitWitness {
    FpPoly factor;  // monic, 0 < deg < deg(modulus)
};
using InvResult = std::variant<FpPoly, SplitWitness>;
InvResult modinv(const FpPoly& f, const FpPoly& m);

// Reduction context for a fixed modulus: precomputes the Newton series
// inverse of the reversed modulus so repeated rem() costs two multiplies.
class RemContext {
public:
    explicit RemContext(FpPoly m);
    const FpPoly& modulus() const { return m_; }
    FpPoly reduce(const FpPoly& f) const;
    FpPoly mul(const FpPoly& f, const FpPoly& g) const;

private:
    void ensure_precision(size_t k) const;
    FpPoly m_;
    mutable FpPoly rinv_;
    mutable size_t prec_ = 0;
};

FpPoly modexp(const FpPoly& base, const Integer& e, const FpPoly& m);
FpPoly modexp(const FpPoly& base, const Integer& e, const RemContext& ctx);

// All distinct roots of f in F_p (multiplicity discarded). The result does
// not depend on the rng state; rng only steers Rabin's splitting choices.
std::set<uint64_t> roots_in_fp(const FpPoly& f, Prng& rng);

namespace detail {
// Both multiplication routes, exposed so tests can cross-check them.
FpPoly mul_schoolbook(const FpPoly& f, const FpPoly& g);
FpPoly mul_kronecker(const FpPoly& f, const FpPoly& g);
}  // namespace detail

}  // namespace sea::poly
