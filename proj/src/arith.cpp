#include "sea/arith.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "sea/errors.hpp"
#include "sea/fp.hpp"
#include "sea/prng.hpp"

namespace sea {

std::string decimal_string(const Rational& q, int sig_digits) {
    if (q == 0) return "0";
    mpf_class f(q, 64 + static_cast<int>(3.33 * sig_digits));
    mp_exp_t exp10 = 0;
    std::string digits = f.get_str(exp10, 10, sig_digits);
    bool neg = !digits.empty() && digits[0] == '-';
    if (neg) digits.erase(digits.begin());
    std::string out = neg ? "-" : "";
    if (exp10 <= 0) {
        out += "0.";
        out.append(static_cast<size_t>(-exp10), '0');
        out += digits;
    } else if (static_cast<size_t>(exp10) >= digits.size()) {
        out += digits;
        out.append(static_cast<size_t>(exp10) - digits.size(), '0');
    } else {
        out += digits.substr(0, static_cast<size_t>(exp10)) + "." + digits.substr(static_cast<size_t>(exp10));
    }
    return out;
}

} // namespace sea

namespace sea::arith {

int jacobi(const Integer& k, const Integer& m) {
    if (m < 3) throw Error(ErrorKind::invalid_argument, "jacobi: modulus must be >= 3");
    if (mpz_even_p(m.get_mpz_t()))
        throw Error(ErrorKind::invalid_argument, "jacobi: modulus must be odd");
    return mpz_jacobi(k.get_mpz_t(), m.get_mpz_t());
}

namespace {

constexpr uint64_t kSegment = uint64_t(1) << 20;

// Odd-only sieve of [2, n]; returns primes as uint64.
std::vector<uint64_t> small_sieve(uint64_t n) {
    std::vector<uint64_t> primes;
    if (n < 2) return primes;
    std::vector<uint8_t> comp((n + 1) / 2, 0); // comp[i] marks 2i+1
    primes.push_back(2);
    for (uint64_t v = 3; v <= n; v += 2) {
        if (comp[v / 2]) continue;
        primes.push_back(v);
        if (v <= n / v)
            for (uint64_t w = v * v; w <= n; w += 2 * v) comp[w / 2] = 1;
    }
    return primes;
}

// Walk primes in [lo, hi] segment by segment, invoking fn on each.
template <typename Fn>
void sieve_range(uint64_t lo, uint64_t hi, Fn&& fn) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<uint64_t>(lo, 2);
    uint64_t root = 1;
    while ((root + 1) * (root + 1) <= hi) ++root;
    std::vector<uint64_t> base = small_sieve(root);
    std::vector<uint8_t> comp(kSegment);
    for (uint64_t seg = lo; seg <= hi; seg += kSegment) {
        uint64_t end = std::min(hi, seg + kSegment - 1);
        uint64_t len = end - seg + 1;
        std::fill(comp.begin(), comp.begin() + len, 0);
        for (uint64_t q : base) {
            uint64_t start = std::max(q * q, (seg + q - 1) / q * q);
            if (start > end) continue;
            for (uint64_t w = start; w <= end; w += q) comp[w - seg] = 1;
        }
        for (uint64_t v = seg; v <= end; ++v)
            if (!comp[v - seg]) fn(v);
        if (end == hi) break; // avoid overflow of seg += kSegment near UINT64_MAX
    }
}

} // namespace

std::vector<uint64_t> primes_in(const Integer& lo, const Integer& hi, uint64_t budget) {
    if (hi < lo) return {};
    if (hi > from_u64(budget))
        throw Error(ErrorKind::resource,
                    "primes_in: upper bound " + hi.get_str() + " exceeds the sieve budget " +
                        from_u64(budget).get_str());
    uint64_t l = lo < 0 ? 0 : to_u64(lo);
    uint64_t h = hi < 0 ? 0 : to_u64(hi);
    std::vector<uint64_t> out;
    sieve_range(l, h, [&out](uint64_t p) { out.push_back(p); });
    return out;
}

uint64_t pi(const Integer& x, uint64_t budget) {
    if (x < 2) return 0;
    if (x > from_u64(budget))
        throw Error(ErrorKind::resource, "pi: argument exceeds the sieve budget");
    uint64_t count = 0;
    sieve_range(2, to_u64(x), [&count](uint64_t) { ++count; });
    return count;
}

namespace {

bool miller_rabin_u64(uint64_t n, uint64_t a) {
    if (a % n == 0) return true;
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    uint64_t x = fp::pow(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = fp::mul(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool miller_rabin_mpz(const Integer& n, const Integer& a) {
    if (a % n == 0) return true;
    Integer d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    Integer x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

// Below 2^64 this witness set is a proven deterministic test.
constexpr uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

} // namespace

bool is_prime(const Integer& n, int rounds) {
    if (n < 2) return false;
    for (uint64_t w : kWitnesses) {
        if (n == from_u64(w)) return true;
        if (n % from_u64(w) == 0) return false;
    }
    if (fits_u64(n)) {
        uint64_t v = to_u64(n);
        for (uint64_t w : kWitnesses)
            if (!miller_rabin_u64(v, w)) return false;
        return true;
    }
    // Large input: probabilistic, with bases derived from n so reruns agree.
    Prng g = Prng::derive(0x6d725f626173ull, n, 0, 0);
    for (int i = 0; i < rounds; ++i) {
        Integer a = 2 + from_u64(g.next()) % (n - 3);
        if (!miller_rabin_mpz(n, a)) return false;
    }
    return true;
}

Integer next_prime(const Integer& n) {
    Integer c = n < 2 ? Integer(2) : Integer(n + 1);
    if (c > 2 && mpz_even_p(c.get_mpz_t())) ++c;
    while (!is_prime(c)) c += (c == 2) ? 1 : 2;
    return c;
}

Integer crt_balanced(const ResidueSystem& sys) {
    Integer m_acc = 1, x = 0;
    for (const auto& [m, r] : sys.entries) {
        if (m < 3 || mpz_even_p(m.get_mpz_t()))
            throw Error(ErrorKind::invalid_argument,
                        "crt_balanced: modulus " + m.get_str() + " is not an odd integer >= 3");
        if (r < 0 || r >= m)
            throw Error(ErrorKind::invalid_argument,
                        "crt_balanced: residue " + r.get_str() + " out of range for modulus " + m.get_str());
        Integer g;
        mpz_gcd(g.get_mpz_t(), m_acc.get_mpz_t(), m.get_mpz_t());
        if (g != 1)
            throw Error(ErrorKind::invalid_argument,
                        "crt_balanced: moduli are not pairwise coprime (offender " + m.get_str() + ")");
        // x' = x + m_acc * ((r - x) / m_acc mod m)
        Integer inv;
        if (mpz_invert(inv.get_mpz_t(), m_acc.get_mpz_t(), m.get_mpz_t()) == 0)
            throw Error(ErrorKind::internal, "crt_balanced: inversion failed on coprime moduli");
        Integer delta = ((r - x) % m + m) % m;
        x += m_acc * (delta * inv % m);
        m_acc *= m;
        x %= m_acc;
        if (x < 0) x += m_acc;
    }
    if (2 * x > m_acc) x -= m_acc;
    return x;
}

std::optional<Integer> sqrt_mod(const Integer& a_in, const Integer& p) {
    Integer a = a_in % p;
    if (a < 0) a += p;
    if (a == 0) return Integer(0);
    if (mpz_jacobi(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    auto powm = [&p](const Integer& b, const Integer& e) {
        Integer r;
        mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    if (p % 4 == 3) return powm(a, (p + 1) / 4);
    // Tonelli-Shanks: p - 1 = q * 2^s with q odd.
    Integer q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    q >>= s;
    Integer z = 2;
    while (mpz_jacobi(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    Integer m = from_u64(s), c = powm(z, q), t = powm(a, q), r = powm(a, (q + 1) / 2);
    while (t != 1) {
        Integer tt = t;
        unsigned long i = 0;
        while (tt != 1) { tt = tt * tt % p; ++i; }
        Integer b = c;
        for (Integer j = 0; j < m - from_u64(i) - 1; ++j) b = b * b % p;
        m = from_u64(i);
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

namespace {

using Solution = std::pair<Integer, Integer>;

std::vector<Solution> sorted_solutions(std::set<Solution>&& found) {
    std::vector<Solution> out(found.begin(), found.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Solution> norm_equation_exhaustive(int d, const Integer& m) {
    std::set<Solution> found;
    Integer vmax = isqrt(m / d);
    for (Integer v = 0; v <= vmax; ++v) {
        Integer rem = m - d * v * v;
        if (is_perfect_square(rem)) found.emplace(isqrt(rem), v);
    }
    return sorted_solutions(std::move(found));
}

// Cornacchia descent for x^2 + d*y^2 = p, p prime not dividing 2d, d in {1,3}.
// Returns the primitive solution if one exists.
std::optional<Solution> cornacchia_prime(int d, const Integer& p) {
    auto r0 = sqrt_mod(Integer(-d), p);
    if (!r0) return std::nullopt;
    Integer r = *r0;
    if (2 * r < p) r = p - r; // start the descent from the larger root
    Integer a = p, b = r, bound = isqrt(p);
    while (b > bound) {
        Integer t = a % b;
        a = b;
        b = t;
    }
    Integer rem = p - b * b;
    if (rem % d != 0 || !is_perfect_square(rem / d)) return std::nullopt;
    return Solution{b, isqrt(rem / d)};
}

struct NormFactor {
    Integer prime;
    unsigned exp;
};

// Trial division by primes below 10^6, then a Miller-Rabin-certified
// cofactor.  Good enough for the production shape m = 4p.
std::vector<NormFactor> factor_or_throw(Integer m) {
    static const std::vector<uint64_t> small = small_sieve(1u << 20);
    std::vector<NormFactor> fs;
    for (uint64_t q : small) {
        if (m == 1) break;
        if (from_u64(q) * from_u64(q) > m) break;
        unsigned e = 0;
        while (m % from_u64(q) == 0) { m /= from_u64(q); ++e; }
        if (e) fs.push_back({from_u64(q), e});
    }
    if (m > 1) {
        if (!is_prime(m))
            throw Error(ErrorKind::resource,
                        "solve_norm_equation: cannot factor cofactor " + m.get_str() +
                            " within the trial-division budget");
        fs.push_back({m, 1});
    }
    return fs;
}

// Complete solution set via factorization in Z[i] (d=1) or the order
// Z[sqrt(-3)] inside Z[omega] (d=3).  Elements are tracked in the basis
// (1, omega), omega^2 = omega - 1, where x + y*sqrt(-3) = (x - y) + 2y*omega;
// for d=1 the pair is just (x, y) in the basis (1, i).
std::vector<Solution> norm_equation_factored(int d, const Integer& m) {
    struct Elt { Integer a, b; };
    auto mul = [d](const Elt& u, const Elt& v) -> Elt {
        if (d == 1) // (a+bi)(c+di)
            return {u.a * v.a - u.b * v.b, u.a * v.b + u.b * v.a};
        // (a+b*omega)(c+d*omega), omega^2 = omega - 1
        return {u.a * v.a - u.b * v.b, u.a * v.b + u.b * v.a + u.b * v.b};
    };

    std::vector<NormFactor> fs = factor_or_throw(m);

    // Split/inert/ramified data per rational prime.
    std::vector<Elt> split_pi, split_pibar;
    std::vector<unsigned> split_exp;
    Elt base{1, 0};
    for (const auto& [q, e] : fs) {
        if ((d == 1 && q == 2) || (d == 3 && q == 3)) {
            // ramified: (1+i) resp. sqrt(-3) = -1 + 2*omega
            Elt ram = d == 1 ? Elt{1, 1} : Elt{-1, 2};
            for (unsigned i = 0; i < e; ++i) base = mul(base, ram);
            continue;
        }
        int cls = mpz_kronecker(Integer(-d).get_mpz_t(), q.get_mpz_t());
        if (cls == -1) {
            if (e % 2) return {}; // inert prime at odd exponent: no solutions
            Integer scale = 1;
            for (unsigned i = 0; i < e / 2; ++i) scale *= q;
            base = mul(base, Elt{scale, 0});
        } else {
            auto sol = cornacchia_prime(d, q);
            if (!sol)
                throw Error(ErrorKind::internal,
                            "solve_norm_equation: descent failed for split prime " + q.get_str());
            Elt pi = d == 1 ? Elt{sol->first, sol->second}
                            : Elt{sol->first - sol->second, 2 * sol->second};
            Elt pibar = d == 1 ? Elt{sol->first, -sol->second}
                               : Elt{sol->first + sol->second, -2 * sol->second};
            split_pi.push_back(pi);
            split_pibar.push_back(pibar);
            split_exp.push_back(e);
        }
    }

    std::vector<Elt> units;
    if (d == 1)
        units = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    else // +-1, +-omega, +-(omega - 1)
        units = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {-1, 1}, {1, -1}};

    std::set<Solution> found;
    // Enumerate exponent splits j_i + (e_i - j_i) across conjugate pairs.
    std::vector<unsigned> j(split_exp.size(), 0);
    while (true) {
        Elt z = base;
        for (size_t i = 0; i < j.size(); ++i) {
            for (unsigned k = 0; k < j[i]; ++k) z = mul(z, split_pi[i]);
            for (unsigned k = j[i]; k < split_exp[i]; ++k) z = mul(z, split_pibar[i]);
        }
        for (const Elt& u : units) {
            Elt w = mul(z, u);
            if (d == 1) {
                found.emplace(abs(w.a), abs(w.b));
            } else if (mpz_even_p(w.b.get_mpz_t())) {
                // back to x + y*sqrt(-3): y = b/2, x = a + y
                Integer y = w.b / 2;
                found.emplace(abs(w.a + y), abs(y));
            }
        }
        size_t i = 0;
        for (; i < j.size(); ++i) {
            if (j[i] < split_exp[i]) { ++j[i]; break; }
            j[i] = 0;
        }
        if (i == j.size()) break;
    }
    return sorted_solutions(std::move(found));
}

} // namespace

std::vector<Solution> solve_norm_equation(int d, const Integer& m) {
    if (d != 1 && d != 3)
        throw Error(ErrorKind::invalid_argument, "solve_norm_equation: d must be 1 or 3");
    if (m < 1)
        throw Error(ErrorKind::invalid_argument, "solve_norm_equation: m must be >= 1");
    if (bit_length(m) <= 26) return norm_equation_exhaustive(d, m);
    return norm_equation_factored(d, m);
}

namespace detail {
std::vector<Solution> solve_norm_equation_cornacchia(int d, const Integer& m) {
    return norm_equation_factored(d, m);
}
} // namespace detail

} // namespace sea::arith
