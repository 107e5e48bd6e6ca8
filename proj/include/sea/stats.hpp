#pragma once

#include <cstdint>
#include <gmpxx.h>

#include <vector>

#include "sea/curve.hpp"
#include "sea/integer.hpp"
#include "sea/sea.hpp"

namespace sea::stats {

using Rational = mpq_class;

// How an odd prime ell relates to the Frobenius discriminant D = t^2 - 4p:
// elkies when D is a nonzero square mod ell, atkin when a non-square,
// ramified when ell | D, excluded when ell is p itself or 2.
enum class PrimeClass { elkies, atkin, ramified, excluded };

PrimeClass classify(const Integer& d, uint64_t ell, uint64_t p);

// Ramified primes sit between the two classes; both bookkeeping conventions
// are carried side by side so their discrepancy stays observable.
enum class Convention { strict, merge_ramified };

// Per-prime tally of the classes over the window [L, 2L].  The accounting
// identity r_elkies + r_atkin + r_ramified + excluded_hit = k is exact.
struct SurveyRecord {
    uint64_t p;
    Integer t;
    Integer d;          // t^2 - 4p
    uint64_t k;         // primes in [L, 2L]
    uint64_t r_elkies;
    uint64_t r_atkin;
    uint64_t r_ramified;
    bool excluded_hit;  // p itself lies in [L, 2L]
};

struct MomentReport {
    int nu;                   // 1 or 2; the moment is |R - k/2|^(2 nu)
    PrimeClass star;          // elkies or atkin
    Convention convention;
    Rational mean_moment;
    Rational deficient_fraction;  // fraction of records with R < k/3
};

struct SurveyResult {
    std::vector<SurveyRecord> records;  // ascending p
    std::vector<MomentReport> moments;  // all (nu, star, convention) combinations
    uint64_t pmin = 0, pmax = 0;
    uint64_t lmin = 0, lmax = 0;
    uint64_t k = 0;
    uint64_t skipped = 0;  // bad reduction, p <= 3, or excluded supersingular
};

struct StatsConfig {
    SeaConfig sea;
    bool include_supersingular = true;
    unsigned threads = 1;
};

// One record per good-reduction prime p in [P, 2P]; moments are exact
// rationals folded in ascending p, independent of thread count.
SurveyResult survey(const curve::RationalCurve& eq, uint64_t big_p, uint64_t big_l,
                    const StatsConfig& cfg = {});

// Same over explicit closed ranges [pmin, pmax] and [lmin, lmax].
SurveyResult survey_range(const curve::RationalCurve& eq, uint64_t pmin, uint64_t pmax,
                          uint64_t lmin, uint64_t lmax, const StatsConfig& cfg = {});

// S = sum over good p in [P, 2P] of jacobi(D_p, prod ells), against the
// exact main term count_p * prod (-1/ell_i) / (ell_i^2 - 1).
struct CharSumReport {
    std::vector<uint64_t> ells;
    uint64_t pmin = 0, pmax = 0;
    uint64_t count_p = 0;
    Integer s;
    Rational main_term;
    Rational deviation;  // s - main_term
};

CharSumReport char_sum(const curve::RationalCurve& eq, const std::vector<uint64_t>& ells,
                       uint64_t big_p, const StatsConfig& cfg = {});

CharSumReport char_sum_range(const curve::RationalCurve& eq, const std::vector<uint64_t>& ells,
                             uint64_t pmin, uint64_t pmax, const StatsConfig& cfg = {});

// (ell^3 - ell^2)/2, less ell exactly when (xi = +1, ell = 1 mod 4) or
// (xi = -1, ell = 3 mod 4): the count of (t, v) pairs mod ell with
// jacobi(t^2 - 4v, ell) = xi weighted over v != 0.
Integer c_ell(uint64_t ell, int xi);

// Sum of prod c_ell(ell_i, gamma_i) over the 8 sign vectors with
// gamma_1 gamma_2 gamma_3 gamma_4 = xi.
Integer a_xi(const std::vector<uint64_t>& ells, int xi);

struct IdentityReport {
    Integer lhs;  // a_xi(+1) - a_xi(-1)
    Integer rhs;  // prod (-1/ell_i) * ell_i
    bool equal;
};

IdentityReport identity_check(const std::vector<uint64_t>& ells);

// Number of primes ell in [L, 2L] dividing d; by convention every prime in
// the window divides 0.
uint64_t omega_l(const Integer& d, uint64_t big_l);

struct OmegaReport {
    int nu;
    uint64_t count_p;
    uint64_t skipped;
    Rational mean;  // average of omega_L(D_p)^nu
};

OmegaReport omega_stats(const curve::RationalCurve& eq, uint64_t big_p, uint64_t big_l, int nu,
                        const StatsConfig& cfg = {});

OmegaReport omega_stats_range(const curve::RationalCurve& eq, uint64_t pmin, uint64_t pmax,
                              uint64_t lmin, uint64_t lmax, int nu, const StatsConfig& cfg = {});

// Unconditional lower-bound check on the Elkies-prime supply for a fixed
// discriminant: R counts odd ell <= L with jacobi(D, ell) = +1, R0 the
// ramified ones, and pass demands R >= L / (5 ln L).
struct DiagnosticReport {
    Integer d;
    uint64_t big_l;
    uint64_t r;
    uint64_t r0;
    double threshold;
    bool pass;
};

DiagnosticReport elkies_count_diagnostic(const Integer& d, uint64_t big_l);

}  // namespace sea::stats
