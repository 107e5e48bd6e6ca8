#ifndef SEA_PRNG_HPP
#define SEA_PRNG_HPP

#include <cstdint>
#include <vector>

#include "sea/integer.hpp"

namespace sea {

namespace detail {
inline uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
} // namespace detail

// xoshiro256** seeded through splitmix64.  A Prng is a small value type;
// randomized routines take their own instance, and derivation from
// (seed, p, a, b) pins every draw for a given curve so nothing depends on
// thread scheduling or call order.
struct Prng {
    uint64_t s[4];

    static Prng from_seed(uint64_t seed) {
        Prng g;
        for (auto& w : g.s) w = detail::splitmix64(seed);
        return g;
    }

    static Prng derive(uint64_t seed, const Integer& p, const Integer& a, const Integer& b) {
        uint64_t h = seed;
        auto absorb = [&h](const Integer& n) {
            h ^= detail::splitmix64(h) ^ (mpz_sgn(n.get_mpz_t()) < 0 ? 0x5851f42d4c957f2dull : 0);
            size_t words = 0;
            Integer abs_n = abs(n);
            std::vector<uint64_t> buf((mpz_sizeinbase(abs_n.get_mpz_t(), 2) + 63) / 64 + 1, 0);
            mpz_export(buf.data(), &words, -1, sizeof(uint64_t), 0, 0, abs_n.get_mpz_t());
            h ^= detail::splitmix64(h) ^ words;
            for (size_t i = 0; i < words; ++i) h ^= detail::splitmix64(h) ^ buf[i];
        };
        absorb(p);
        absorb(a);
        absorb(b);
        return from_seed(h);
    }

    uint64_t next() {
        auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        uint64_t result = rotl(s[1] * 5, 7) * 9;
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Uniform draw from [0, bound), bound >= 1, by rejection.
    uint64_t below(uint64_t bound) {
        uint64_t zone = (UINT64_MAX / bound) * bound;
        uint64_t v;
        do {
            v = next();
        } while (v >= zone);
        return v % bound;
    }
};

} // namespace sea

#endif
