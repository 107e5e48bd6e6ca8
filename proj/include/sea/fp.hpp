#ifndef SEA_FP_HPP
#define SEA_FP_HPP

#include <cstdint>
#include <optional>

#include "sea/integer.hpp"

namespace sea::fp {

// Scalar arithmetic modulo a prime p < 2^64.  Values are plain residues in
// [0, p); products go through __int128.  The polynomial and curve layers are
// built on these; field primes at or above 2^64 are rejected where the field
// is constructed (see to_u64).

inline uint64_t add(uint64_t a, uint64_t b, uint64_t p) {
    uint64_t s = a + b;
    if (s < a || s >= p) s -= p;
    return s;
}

inline uint64_t sub(uint64_t a, uint64_t b, uint64_t p) {
    return a >= b ? a - b : a + (p - b);
}

inline uint64_t neg(uint64_t a, uint64_t p) { return a ? p - a : 0; }

inline uint64_t mul(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

uint64_t pow(uint64_t base, uint64_t e, uint64_t p);
uint64_t pow(uint64_t base, const Integer& e, uint64_t p);

// Inverse of a nonzero residue modulo prime p (extended Euclid).  Throws
// invalid_argument on a == 0.
uint64_t inv(uint64_t a, uint64_t p);

// Reduce an arbitrary Integer (possibly negative) into [0, p).
uint64_t mod_u64(const Integer& n, uint64_t p);

// Square root modulo an odd prime, or nullopt for a non-residue.
std::optional<uint64_t> sqrt(uint64_t a, uint64_t p);

} // namespace sea::fp

#endif
