#ifndef SEA_INTEGER_HPP
#define SEA_INTEGER_HPP

#include <cstdint>
#include <gmpxx.h>
#include <string>

#include "sea/errors.hpp"

namespace sea {

using Integer = mpz_class;
using Rational = mpq_class;

inline size_t bit_length(const Integer& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

inline bool fits_u64(const Integer& n) {
    return n >= 0 && bit_length(n) <= 64;
}

inline uint64_t to_u64(const Integer& n) {
    if (!fits_u64(n))
        throw Error(ErrorKind::resource,
                    "integer " + n.get_str() + " exceeds the 64-bit width this layer supports");
    uint64_t lo = mpz_get_ui(n.get_mpz_t());
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 32) {
        // mpz_get_ui returns the low bits of the absolute value; on LP64 this
        // is already the full value, but stay explicit about it.
        Integer hi = n >> 32;
        lo = (static_cast<uint64_t>(mpz_get_ui(hi.get_mpz_t())) << 32) |
             (mpz_get_ui(n.get_mpz_t()) & 0xffffffffull);
    }
    return lo;
}

inline Integer from_u64(uint64_t v) {
    Integer n;
    mpz_import(n.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return n;
}

inline Integer isqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const Integer& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// Decimal rendering of an exact rational with a fixed number of significant
// digits, used only at output boundaries.
std::string decimal_string(const Rational& q, int sig_digits = 12);

} // namespace sea

#endif
