#pragma once

#include <cstdint>
#include <string>

#include "sea/arith.hpp"
#include "sea/integer.hpp"
#include "sea/prng.hpp"

namespace sea::curve {

// y^2 = x^3 + a*x + b over F_p, p prime > 3, nonsingular.
struct CurveOverFp {
    uint64_t p;
    uint64_t a;
    uint64_t b;

    CurveOverFp(uint64_t p, uint64_t a, uint64_t b);

    // x^3 + a*x + b mod p.
    uint64_t f_eval(uint64_t x) const;
};

struct Point {
    bool infinity = true;
    uint64_t x = 0;
    uint64_t y = 0;

    static Point at_infinity() { return Point{}; }
    static Point affine(uint64_t x, uint64_t y) { return Point{false, x, y}; }

    friend bool operator==(const Point&, const Point&) = default;
};

bool on_curve(const CurveOverFp& e, const Point& pt);
Point negate(const CurveOverFp& e, const Point& pt);
Point add(const CurveOverFp& e, const Point& lhs, const Point& rhs);
Point scalar_mul(const CurveOverFp& e, const Integer& k, const Point& pt);
// Uniform random point, never the point at infinity.
Point random_point(const CurveOverFp& e, Prng& rng);

// Integral model y^2 = x^3 + a*x + b over Q.
struct RationalCurve {
    Integer a;
    Integer b;
    Integer disc;  // -16(4a^3 + 27b^2), nonzero

    RationalCurve(Integer a, Integer b);
};

CurveOverFp reduce(const RationalCurve& eq, const Integer& p);

enum class Method { naive, schoof, sea, cm_j0, cm_j1728, supersingular };
std::string method_name(Method m);

// Point-count result with enough context to audit it: the Hasse bound and
// the consistency of every recorded per-ell residue are enforced here, so a
// certificate that exists is a certificate that passed.
struct TraceCertificate {
    uint64_t p;
    Integer n;  // group order
    Integer t;  // p + 1 - n
    Integer d;  // t^2 - 4p, always negative
    Method method;
    arith::ResidueSystem residue_log;  // empty for naive and CM paths

    static TraceCertificate from_order(uint64_t p, const Integer& n, Method method,
                                       arith::ResidueSystem residue_log = {});
    static TraceCertificate from_trace(uint64_t p, const Integer& t, Method method,
                                       arith::ResidueSystem residue_log = {});
};

inline constexpr uint64_t kNaiveBudget = uint64_t{1} << 22;

TraceCertificate naive_count(const CurveOverFp& e, uint64_t budget = kNaiveBudget);

uint64_t j_invariant(const CurveOverFp& e);

// True iff the trace of Frobenius is 0. Monte Carlo filter (20 random points
// killed by p+1) with a deterministic confirmation, so the answer does not
// depend on the rng.
bool is_supersingular(const CurveOverFp& e, Prng& rng);

}  // namespace sea::curve
