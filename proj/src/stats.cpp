#include "sea/stats.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sea/arith.hpp"
#include "sea/errors.hpp"

namespace sea::stats {
namespace {

void require_odd_prime(uint64_t ell, const char* who) {
    if (ell < 3 || ell % 2 == 0 || !arith::is_prime(from_u64(ell)))
        throw Error(ErrorKind::invalid_argument,
                    std::string(who) + " requires an odd prime, got " + std::to_string(ell));
}

void require_sign(int xi, const char* who) {
    if (xi != 1 && xi != -1)
        throw Error(ErrorKind::invalid_argument,
                    std::string(who) + " requires xi in {+1, -1}, got " + std::to_string(xi));
}

Rational make_rational(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

void require_range(uint64_t lo, uint64_t hi, uint64_t min_lo, const char* what) {
    if (lo < min_lo || hi < lo)
        throw Error(ErrorKind::invalid_argument,
                    std::string(what) + " range requires " + std::to_string(min_lo) +
                        " <= min <= max, got [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
}

// Trace at every prime in [pmin, pmax], ascending; slots without a value are
// skipped primes (bad reduction or excluded supersingular).  Per-prime work
// is pure, so striping across threads cannot change any slot.
std::vector<std::optional<std::pair<uint64_t, Integer>>> traces_in_range(
    const curve::RationalCurve& eq, uint64_t pmin, uint64_t pmax, const StatsConfig& cfg) {
    require_range(pmin, pmax, 5, "prime");
    std::vector<uint64_t> ps = arith::primes_in(from_u64(pmin), from_u64(pmax));
    std::vector<std::optional<std::pair<uint64_t, Integer>>> slots(ps.size());
    const unsigned threads = cfg.threads == 0 ? 1 : cfg.threads;
    auto work = [&](unsigned stripe) {
        for (size_t i = stripe; i < ps.size(); i += threads) {
            try {
                curve::CurveOverFp e = curve::reduce(eq, from_u64(ps[i]));
                curve::TraceCertificate cert = sea_trace(e, cfg.sea);
                if (!cfg.include_supersingular && cert.t == 0) continue;
                slots[i].emplace(ps[i], cert.t);
            } catch (const Error& err) {
                if (err.kind() != ErrorKind::bad_reduction) throw;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        pool.reserve(threads);
        for (unsigned s = 0; s < threads; ++s)
            pool.emplace_back([&, s] {
                try {
                    work(s);
                } catch (...) {
                    errors[s] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
    return slots;
}

}  // namespace

PrimeClass classify(const Integer& d, uint64_t ell, uint64_t p) {
    if (d >= 0)
        throw Error(ErrorKind::invalid_argument,
                    "classify requires a negative discriminant, got " + d.get_str());
    if (ell == 2) return PrimeClass::excluded;
    require_odd_prime(ell, "classify");
    if (ell == p) return PrimeClass::excluded;
    switch (arith::jacobi(d, from_u64(ell))) {
        case 0: return PrimeClass::ramified;
        case 1: return PrimeClass::elkies;
        default: return PrimeClass::atkin;
    }
}

SurveyResult survey(const curve::RationalCurve& eq, uint64_t big_p, uint64_t big_l,
                    const StatsConfig& cfg) {
    return survey_range(eq, big_p, 2 * big_p, big_l, 2 * big_l, cfg);
}

SurveyResult survey_range(const curve::RationalCurve& eq, uint64_t pmin, uint64_t pmax,
                          uint64_t lmin, uint64_t lmax, const StatsConfig& cfg) {
    require_range(lmin, lmax, 3, "window");
    const std::vector<uint64_t> window = arith::primes_in(from_u64(lmin), from_u64(lmax));
    const uint64_t k = window.size();

    SurveyResult out;
    out.pmin = pmin;
    out.pmax = pmax;
    out.lmin = lmin;
    out.lmax = lmax;
    out.k = k;
    for (const auto& slot : traces_in_range(eq, pmin, pmax, cfg)) {
        if (!slot) {
            ++out.skipped;
            continue;
        }
        const auto& [p, t] = *slot;
        SurveyRecord rec{p, t, t * t - 4 * from_u64(p), k, 0, 0, 0, false};
        for (uint64_t ell : window) {
            switch (classify(rec.d, ell, p)) {
                case PrimeClass::elkies: ++rec.r_elkies; break;
                case PrimeClass::atkin: ++rec.r_atkin; break;
                case PrimeClass::ramified: ++rec.r_ramified; break;
                case PrimeClass::excluded: rec.excluded_hit = true; break;
            }
        }
        if (rec.r_elkies + rec.r_atkin + rec.r_ramified + (rec.excluded_hit ? 1 : 0) != k)
            throw Error(ErrorKind::internal, "survey accounting identity broken");
        out.records.push_back(std::move(rec));
    }

    const Integer n = from_u64(out.records.size());
    for (Convention conv : {Convention::strict, Convention::merge_ramified}) {
        for (PrimeClass star : {PrimeClass::elkies, PrimeClass::atkin}) {
            for (int nu : {1, 2}) {
                Integer sum = 0;
                Integer deficient = 0;
                for (const SurveyRecord& rec : out.records) {
                    uint64_t r = star == PrimeClass::elkies ? rec.r_elkies : rec.r_atkin;
                    if (star == PrimeClass::elkies && conv == Convention::merge_ramified)
                        r += rec.r_ramified;
                    // |r - k/2|^(2 nu) = (2r - k)^(2 nu) / 4^nu
                    Integer centered = 2 * from_u64(r) - from_u64(k);
                    Integer power = centered * centered;
                    if (nu == 2) power *= power;
                    sum += power;
                    if (3 * from_u64(r) < from_u64(k)) ++deficient;
                }
                MomentReport rep{nu, star, conv, 0, 0};
                if (n > 0) {
                    rep.mean_moment = make_rational(sum, (nu == 1 ? 4 : 16) * n);
                    rep.deficient_fraction = make_rational(deficient, n);
                }
                out.moments.push_back(std::move(rep));
            }
        }
    }
    return out;
}

CharSumReport char_sum(const curve::RationalCurve& eq, const std::vector<uint64_t>& ells,
                       uint64_t big_p, const StatsConfig& cfg) {
    return char_sum_range(eq, ells, big_p, 2 * big_p, cfg);
}

CharSumReport char_sum_range(const curve::RationalCurve& eq, const std::vector<uint64_t>& ells,
                             uint64_t pmin, uint64_t pmax, const StatsConfig& cfg) {
    if (ells.size() != 2 && ells.size() != 4)
        throw Error(ErrorKind::invalid_argument, "char_sum takes 2 or 4 moduli");
    for (uint64_t ell : ells) require_odd_prime(ell, "char_sum");
    if (std::set<uint64_t>(ells.begin(), ells.end()).size() != ells.size())
        throw Error(ErrorKind::invalid_argument, "char_sum moduli must be distinct");

    Integer modulus = 1;
    for (uint64_t ell : ells) modulus *= from_u64(ell);

    CharSumReport rep{ells, pmin, pmax, 0, 0, 0, 0};
    for (const auto& slot : traces_in_range(eq, pmin, pmax, cfg)) {
        if (!slot) continue;
        const auto& [p, t] = *slot;
        const Integer d = t * t - 4 * from_u64(p);
        const int term = arith::jacobi(d, modulus);
        int split = 1;
        for (uint64_t ell : ells) split *= arith::jacobi(d, from_u64(ell));
        if (term != split)
            throw Error(ErrorKind::internal, "jacobi symbol lost multiplicativity");
        rep.s += term;
        ++rep.count_p;
    }

    Integer num = from_u64(rep.count_p);
    Integer den = 1;
    for (uint64_t ell : ells) {
        num *= arith::jacobi(Integer(-1), from_u64(ell));
        den *= from_u64(ell) * from_u64(ell) - 1;
    }
    rep.main_term = make_rational(num, den);
    rep.deviation = Rational(rep.s) - rep.main_term;
    return rep;
}

Integer c_ell(uint64_t ell, int xi) {
    require_odd_prime(ell, "c_ell");
    require_sign(xi, "c_ell");
    const Integer l = from_u64(ell);
    Integer value = (l * l * l - l * l) / 2;
    if ((xi == 1 && ell % 4 == 1) || (xi == -1 && ell % 4 == 3)) value -= l;
    return value;
}

Integer a_xi(const std::vector<uint64_t>& ells, int xi) {
    if (ells.size() != 4)
        throw Error(ErrorKind::invalid_argument, "a_xi takes exactly 4 moduli");
    for (uint64_t ell : ells) require_odd_prime(ell, "a_xi");
    if (std::set<uint64_t>(ells.begin(), ells.end()).size() != 4)
        throw Error(ErrorKind::invalid_argument, "a_xi moduli must be distinct");
    require_sign(xi, "a_xi");

    Integer total = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        int product_sign = 1;
        Integer term = 1;
        for (unsigned i = 0; i < 4; ++i) {
            const int gamma = (mask >> i) & 1 ? -1 : 1;
            product_sign *= gamma;
            term *= c_ell(ells[i], gamma);
        }
        if (product_sign == xi) total += term;
    }
    return total;
}

IdentityReport identity_check(const std::vector<uint64_t>& ells) {
    Integer lhs = a_xi(ells, 1) - a_xi(ells, -1);
    Integer rhs = 1;
    for (uint64_t ell : ells) rhs *= arith::jacobi(Integer(-1), from_u64(ell)) * from_u64(ell);
    return {lhs, rhs, lhs == rhs};
}

namespace {

uint64_t omega_window(const Integer& d, uint64_t lmin, uint64_t lmax) {
    require_range(lmin, lmax, 3, "omega window");
    const std::vector<uint64_t> window = arith::primes_in(from_u64(lmin), from_u64(lmax));
    if (d == 0) return window.size();
    uint64_t count = 0;
    for (uint64_t ell : window)
        if (mpz_divisible_ui_p(d.get_mpz_t(), ell)) ++count;
    return count;
}

}  // namespace

uint64_t omega_l(const Integer& d, uint64_t big_l) {
    if (big_l < 3)
        throw Error(ErrorKind::invalid_argument, "omega window requires L >= 3");
    return omega_window(d, big_l, 2 * big_l);
}

OmegaReport omega_stats(const curve::RationalCurve& eq, uint64_t big_p, uint64_t big_l, int nu,
                        const StatsConfig& cfg) {
    return omega_stats_range(eq, big_p, 2 * big_p, big_l, 2 * big_l, nu, cfg);
}

OmegaReport omega_stats_range(const curve::RationalCurve& eq, uint64_t pmin, uint64_t pmax,
                              uint64_t lmin, uint64_t lmax, int nu, const StatsConfig& cfg) {
    if (nu < 1 || nu > 4)
        throw Error(ErrorKind::invalid_argument, "omega moment order must be in 1..4");
    require_range(lmin, lmax, 3, "omega window");
    OmegaReport rep{nu, 0, 0, 0};
    Integer sum = 0;
    for (const auto& slot : traces_in_range(eq, pmin, pmax, cfg)) {
        if (!slot) {
            ++rep.skipped;
            continue;
        }
        const auto& [p, t] = *slot;
        Integer w = from_u64(omega_window(t * t - 4 * from_u64(p), lmin, lmax));
        Integer power = w;
        for (int i = 1; i < nu; ++i) power *= w;
        sum += power;
        ++rep.count_p;
    }
    if (rep.count_p > 0) rep.mean = make_rational(sum, from_u64(rep.count_p));
    return rep;
}

DiagnosticReport elkies_count_diagnostic(const Integer& d, uint64_t big_l) {
    if (d >= 0)
        throw Error(ErrorKind::invalid_argument, "diagnostic requires a negative discriminant");
    if (big_l < 3)
        throw Error(ErrorKind::invalid_argument, "diagnostic requires L >= 3");
    DiagnosticReport rep{d, big_l, 0, 0, 0.0, false};
    for (uint64_t ell : arith::primes_in(Integer(3), from_u64(big_l))) {
        switch (arith::jacobi(d, from_u64(ell))) {
            case 1: ++rep.r; break;
            case 0: ++rep.r0; break;
            default: break;
        }
    }
    rep.threshold = static_cast<double>(big_l) / (5.0 * std::log(static_cast<double>(big_l)));
    rep.pass = static_cast<double>(rep.r) >= rep.threshold;
    return rep;
}

}  // namespace sea::stats
