#ifndef SEA_ARITH_HPP
#define SEA_ARITH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sea/integer.hpp"

namespace sea::arith {

// Jacobi symbol (k/m); m must be odd and >= 3.  Returns 0 iff gcd(k, m) > 1.
int jacobi(const Integer& k, const Integer& m);

inline constexpr uint64_t kSieveBudget = uint64_t(1) << 40;

// Ascending primes in the closed interval [lo, hi] via a segmented sieve
// (2^20-entry segments).  hi above the budget raises the resource error.
std::vector<uint64_t> primes_in(const Integer& lo, const Integer& hi,
                                uint64_t budget = kSieveBudget);

// pi(x): number of primes <= x.
uint64_t pi(const Integer& x, uint64_t budget = kSieveBudget);

// Miller-Rabin.  Deterministic witness set {2,...,37} below 2^64, otherwise
// `rounds` bases derived deterministically from n (error rate <= 4^-rounds).
bool is_prime(const Integer& n, int rounds = 40);

Integer next_prime(const Integer& n);

// Congruence system x = r (mod m) with odd moduli >= 3, pairwise coprime,
// 0 <= r < m.  Violations surface as invalid_argument from crt_balanced.
struct ResidueSystem {
    std::vector<std::pair<Integer, Integer>> entries; // (modulus, residue)

    Integer product() const {
        Integer m = 1;
        for (const auto& e : entries) m *= e.first;
        return m;
    }
};

// Balanced CRT lift: the unique x with -M/2 < x <= M/2, M the modulus product.
Integer crt_balanced(const ResidueSystem& sys);

// All (t >= 0, v >= 0) with t^2 + d*v^2 = m, d in {1, 3}, ordered by t.
// Exhaustive below an internal threshold; above it Cornacchia's algorithm
// seeded by square roots of -d (Tonelli-Shanks), with non-primitive
// solutions recovered by scanning square divisors.  Requires m to yield to
// trial division plus a prime cofactor in that regime (always true for the
// production shape m = 4p); otherwise raises the resource error.
std::vector<std::pair<Integer, Integer>> solve_norm_equation(int d, const Integer& m);

// Square root of a modulo an odd prime p, or nullopt for a non-residue.
std::optional<Integer> sqrt_mod(const Integer& a, const Integer& p);

namespace detail {
// Test hook: force the Cornacchia path regardless of size, to cross-check it
// against the exhaustive route.
std::vector<std::pair<Integer, Integer>> solve_norm_equation_cornacchia(int d, const Integer& m);
} // namespace detail

} // namespace sea::arith

#endif
