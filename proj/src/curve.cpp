#include "sea/curve.hpp"

#include <vector>

#include "sea/errors.hpp"
#include "sea/fp.hpp"
#include "sea/schoof.hpp"

namespace sea::curve {

CurveOverFp::CurveOverFp(uint64_t p, uint64_t a, uint64_t b) : p(p), a(a % p), b(b % p) {
    if (p <= 3) throw Error(ErrorKind::invalid_argument, "curve characteristic must exceed 3");
    uint64_t disc = fp::add(fp::mul(4, fp::pow(this->a, 3, p), p),
                            fp::mul(27, fp::mul(this->b, this->b, p), p), p);
    if (disc == 0) throw Error(ErrorKind::invalid_argument, "singular curve: 4a^3 + 27b^2 = 0");
}

uint64_t CurveOverFp::f_eval(uint64_t x) const {
    return fp::add(fp::mul(fp::add(fp::mul(x, x, p), a, p), x, p), b, p);
}

bool on_curve(const CurveOverFp& e, const Point& pt) {
    if (pt.infinity) return true;
    if (pt.x >= e.p || pt.y >= e.p) return false;
    return fp::mul(pt.y, pt.y, e.p) == e.f_eval(pt.x);
}

namespace {

void require_on_curve(const CurveOverFp& e, const Point& pt) {
    if (!on_curve(e, pt)) throw Error(ErrorKind::invalid_argument, "point not on curve");
}

}  // namespace

Point negate(const CurveOverFp& e, const Point& pt) {
    require_on_curve(e, pt);
    if (pt.infinity) return pt;
    return Point::affine(pt.x, fp::neg(pt.y, e.p));
}

Point add(const CurveOverFp& e, const Point& lhs, const Point& rhs) {
    require_on_curve(e, lhs);
    require_on_curve(e, rhs);
    if (lhs.infinity) return rhs;
    if (rhs.infinity) return lhs;
    const uint64_t p = e.p;
    uint64_t lambda;
    if (lhs.x == rhs.x) {
        if (fp::add(lhs.y, rhs.y, p) == 0) return Point::at_infinity();
        // Tangent: both points coincide with y != 0.
        uint64_t num = fp::add(fp::mul(3, fp::mul(lhs.x, lhs.x, p), p), e.a, p);
        lambda = fp::mul(num, fp::inv(fp::add(lhs.y, lhs.y, p), p), p);
    } else {
        uint64_t num = fp::sub(rhs.y, lhs.y, p);
        lambda = fp::mul(num, fp::inv(fp::sub(rhs.x, lhs.x, p), p), p);
    }
    uint64_t x3 = fp::sub(fp::sub(fp::mul(lambda, lambda, p), lhs.x, p), rhs.x, p);
    uint64_t y3 = fp::sub(fp::mul(lambda, fp::sub(lhs.x, x3, p), p), lhs.y, p);
    return Point::affine(x3, y3);
}

Point scalar_mul(const CurveOverFp& e, const Integer& k, const Point& pt) {
    require_on_curve(e, pt);
    Integer m = k;
    Point base = pt;
    if (m < 0) {
        m = -m;
        base = negate(e, base);
    }
    Point acc = Point::at_infinity();
    for (size_t i = mpz_sizeinbase(m.get_mpz_t(), 2); i-- > 0;) {
        acc = add(e, acc, acc);
        if (mpz_tstbit(m.get_mpz_t(), i)) acc = add(e, acc, base);
    }
    return m == 0 ? Point::at_infinity() : acc;
}

Point random_point(const CurveOverFp& e, Prng& rng) {
    for (;;) {
        uint64_t x = rng.below(e.p);
        uint64_t v = e.f_eval(x);
        if (v == 0) return Point::affine(x, 0);
        if (auto y = fp::sqrt(v, e.p)) {
            uint64_t ry = (rng.next() & 1) ? fp::neg(*y, e.p) : *y;
            return Point::affine(x, ry);
        }
    }
}

RationalCurve::RationalCurve(Integer a_in, Integer b_in)
    : a(std::move(a_in)), b(std::move(b_in)), disc(-16 * (4 * a * a * a + 27 * b * b)) {
    if (disc == 0) throw Error(ErrorKind::invalid_argument, "singular rational model");
}

CurveOverFp reduce(const RationalCurve& eq, const Integer& p) {
    if (p <= 3)
        throw Error(ErrorKind::bad_reduction, "no good reduction at p = " + p.get_str());
    if (mpz_divisible_p(eq.disc.get_mpz_t(), p.get_mpz_t()))
        throw Error(ErrorKind::bad_reduction,
                    "discriminant divisible by p = " + p.get_str() + ": bad reduction");
    uint64_t pu = to_u64(p);
    Integer am, bm;
    mpz_fdiv_r(am.get_mpz_t(), eq.a.get_mpz_t(), p.get_mpz_t());
    mpz_fdiv_r(bm.get_mpz_t(), eq.b.get_mpz_t(), p.get_mpz_t());
    return CurveOverFp(pu, to_u64(am), to_u64(bm));
}

std::string method_name(Method m) {
    switch (m) {
        case Method::naive: return "naive";
        case Method::schoof: return "schoof";
        case Method::sea: return "sea";
        case Method::cm_j0: return "cm-j0";
        case Method::cm_j1728: return "cm-j1728";
        case Method::supersingular: return "supersingular";
    }
    throw Error(ErrorKind::internal, "unknown method");
}

TraceCertificate TraceCertificate::from_order(uint64_t p, const Integer& n, Method method,
                                              arith::ResidueSystem residue_log) {
    return from_trace(p, from_u64(p) + 1 - n, method, std::move(residue_log));
}

TraceCertificate TraceCertificate::from_trace(uint64_t p, const Integer& t, Method method,
                                              arith::ResidueSystem residue_log) {
    Integer pz = from_u64(p);
    Integer d = t * t - 4 * pz;
    if (d >= 0) throw Error(ErrorKind::internal, "trace violates the Hasse bound");
    for (const auto& [ell, r] : residue_log.entries) {
        Integer got;
        mpz_fdiv_r(got.get_mpz_t(), t.get_mpz_t(), ell.get_mpz_t());
        if (got != r)
            throw Error(ErrorKind::internal,
                        "trace disagrees with recorded residue mod " + ell.get_str());
    }
    return TraceCertificate{p, pz + 1 - t, t, d, method, std::move(residue_log)};
}

TraceCertificate naive_count(const CurveOverFp& e, uint64_t budget) {
    const uint64_t p = e.p;
    if (p > budget)
        throw Error(ErrorKind::resource, "field size exceeds the naive counting budget");
    // chi(f(x)) summed over all x, chi read off a bit table of the squares.
    std::vector<uint64_t> sq((p + 63) / 64, 0);
    for (uint64_t x = 0; x <= p / 2; ++x) {
        uint64_t s = fp::mul(x, x, p);
        sq[s >> 6] |= uint64_t{1} << (s & 63);
    }
    int64_t sum = 0;
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t v = e.f_eval(x);
        if (v == 0) continue;
        sum += (sq[v >> 6] >> (v & 63)) & 1 ? 1 : -1;
    }
    return TraceCertificate::from_order(p, from_u64(p) + 1 + sum, Method::naive);
}

uint64_t j_invariant(const CurveOverFp& e) {
    const uint64_t p = e.p;
    uint64_t a3 = fp::mul(4, fp::pow(e.a, 3, p), p);
    uint64_t den = fp::add(a3, fp::mul(27, fp::mul(e.b, e.b, p), p), p);
    return fp::mul(fp::mul(1728 % p, a3, p), fp::inv(den, p), p);
}

bool is_supersingular(const CurveOverFp& e, Prng& rng) {
    const Integer order = from_u64(e.p) + 1;
    for (int i = 0; i < 20; ++i) {
        Point q = random_point(e, rng);
        if (!scalar_mul(e, order, q).infinity) return false;
    }
    return schoof::schoof_trace(e, rng).t == 0;
}

}  // namespace sea::curve
