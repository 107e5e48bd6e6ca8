#include "sea/fp.hpp"

#include "sea/arith.hpp"
#include "sea/errors.hpp"

namespace sea::fp {

uint64_t pow(uint64_t base, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p, b = base % p;
    while (e) {
        if (e & 1) r = mul(r, b, p);
        b = mul(b, b, p);
        e >>= 1;
    }
    return r;
}

uint64_t pow(uint64_t base, const Integer& e, uint64_t p) {
    if (e < 0) throw Error(ErrorKind::invalid_argument, "fp::pow: negative exponent");
    uint64_t r = 1 % p, b = base % p;
    size_t nbits = e == 0 ? 0 : bit_length(e);
    for (size_t i = 0; i < nbits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, b, p);
        b = mul(b, b, p);
    }
    return r;
}

uint64_t inv(uint64_t a, uint64_t p) {
    if (a == 0) throw Error(ErrorKind::invalid_argument, "fp::inv: zero has no inverse");
    // Extended Euclid; p prime so the gcd is 1.
    uint64_t r0 = p, r1 = a % p;
    __int128 s0 = 0, s1 = 1;
    while (r1 != 0) {
        uint64_t q = r0 / r1;
        uint64_t r2 = r0 - q * r1;
        __int128 s2 = s0 - static_cast<__int128>(q) * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw Error(ErrorKind::internal, "fp::inv: modulus not prime to argument");
    __int128 s = s0 % static_cast<__int128>(p);
    if (s < 0) s += p;
    return static_cast<uint64_t>(s);
}

uint64_t mod_u64(const Integer& n, uint64_t p) {
    // Floor division keeps the remainder nonnegative for negative n.
    return mpz_fdiv_ui(n.get_mpz_t(), p);
}

std::optional<uint64_t> sqrt(uint64_t a, uint64_t p) {
    auto r = arith::sqrt_mod(from_u64(a % p), from_u64(p));
    if (!r) return std::nullopt;
    return to_u64(*r);
}

} // namespace sea::fp
