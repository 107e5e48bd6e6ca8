#include <doctest.h>

#include "sea/curve.hpp"
#include "sea/errors.hpp"
#include "sea/fp.hpp"

using namespace sea;
using namespace sea::curve;

namespace {

CurveOverFp random_curve(uint64_t p, Prng& rng) {
    for (;;) {
        uint64_t a = rng.below(p), b = rng.below(p);
        uint64_t disc = fp::add(fp::mul(4, fp::pow(a, 3, p), p),
                                fp::mul(27, fp::mul(b, b, p), p), p);
        if (disc != 0) return CurveOverFp(p, a, b);
    }
}

}  // namespace

TEST_SUITE("curve") {

TEST_CASE("construction rejects bad parameters") {
    CHECK_THROWS_AS(CurveOverFp(3, 1, 1), Error);
    CHECK_THROWS_AS(CurveOverFp(5, 0, 0), Error);   // 4*0+27*0 = 0
    CHECK_THROWS_AS(CurveOverFp(7, 0, 0), Error);
    CHECK_NOTHROW(CurveOverFp(5, 1, 1));
}

TEST_CASE("group law pinned example") {
    CurveOverFp e(5, 1, 1);
    Point p = Point::affine(0, 1);
    CHECK(add(e, p, p) == Point::affine(4, 2));
    CHECK(scalar_mul(e, 1, p) == p);
    CHECK(add(e, p, negate(e, p)).infinity);
    CHECK(add(e, p, Point::at_infinity()) == p);
    CHECK(scalar_mul(e, 0, p).infinity);
}

TEST_CASE("off-curve input rejected") {
    CurveOverFp e(5, 1, 1);
    Point bad = Point::affine(1, 1);
    REQUIRE(!on_curve(e, bad));
    CHECK_THROWS_AS(add(e, bad, bad), Error);
    CHECK_THROWS_AS(negate(e, bad), Error);
    CHECK_THROWS_AS(scalar_mul(e, 2, bad), Error);
}

TEST_CASE("group law associativity on random triples") {
    Prng rng = Prng::from_seed(2001);
    for (int c = 0; c < 5; ++c) {
        CurveOverFp e = random_curve(10007, rng);
        for (int it = 0; it < 10; ++it) {
            Point p = random_point(e, rng), q = random_point(e, rng), r = random_point(e, rng);
            CHECK(add(e, add(e, p, q), r) == add(e, p, add(e, q, r)));
        }
    }
}

TEST_CASE("negation and inverse scalars") {
    Prng rng = Prng::from_seed(2002);
    CurveOverFp e = random_curve(4099, rng);
    Point p = random_point(e, rng);
    CHECK(add(e, scalar_mul(e, 7, p), scalar_mul(e, -7, p)).infinity);
    CHECK(scalar_mul(e, -1, p) == negate(e, p));
}

TEST_CASE("naive count pinned examples") {
    TraceCertificate c1 = naive_count(CurveOverFp(5, 1, 1));
    CHECK(c1.n == 9);
    CHECK(c1.t == -3);
    CHECK(c1.d == -11);
    CHECK(c1.method == Method::naive);
    CHECK(c1.residue_log.entries.empty());

    TraceCertificate c2 = naive_count(CurveOverFp(5, 0, 1));
    CHECK(c2.n == 6);
    CHECK(c2.t == 0);

    TraceCertificate c3 = naive_count(CurveOverFp(7, 0, 1));
    CHECK(c3.n == 12);
    CHECK(c3.t == -4);
}

TEST_CASE("naive count budget is enforced") {
    try {
        naive_count(CurveOverFp(1009, 1, 1), 100);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::resource);
    }
}

TEST_CASE("naive count matches a direct point enumeration") {
    Prng rng = Prng::from_seed(2003);
    for (uint64_t p : {5ull, 7ull, 101ull, 257ull}) {
        CurveOverFp e = random_curve(p, rng);
        Integer n = 1;  // infinity
        for (uint64_t x = 0; x < p; ++x)
            for (uint64_t y = 0; y < p; ++y)
                if (fp::mul(y, y, p) == e.f_eval(x)) n += 1;
        CHECK(naive_count(e).n == n);
    }
}

TEST_CASE("lagrange: group order kills random points") {
    Prng rng = Prng::from_seed(2004);
    for (int c = 0; c < 100; ++c) {
        uint64_t p = 5;
        while (p <= 5 || p > 4096)
            p = to_u64(arith::next_prime(from_u64(5 + rng.below(4096 - 5))));
        CurveOverFp e = random_curve(p, rng);
        Integer n = naive_count(e).n;
        for (int it = 0; it < 10; ++it)
            CHECK(scalar_mul(e, n, random_point(e, rng)).infinity);
    }
}

TEST_CASE("naive count is isomorphism invariant") {
    Prng rng = Prng::from_seed(2005);
    for (int c = 0; c < 20; ++c) {
        uint64_t p = to_u64(arith::next_prime(from_u64(100 + rng.below(2000))));
        CurveOverFp e = random_curve(p, rng);
        uint64_t u = 1 + rng.below(p - 1);
        uint64_t u2 = fp::mul(u, u, p), u4 = fp::mul(u2, u2, p), u6 = fp::mul(u4, u2, p);
        CurveOverFp e2(p, fp::mul(u4, e.a, p), fp::mul(u6, e.b, p));
        CHECK(naive_count(e).n == naive_count(e2).n);
    }
}

TEST_CASE("j invariant examples") {
    CHECK(j_invariant(CurveOverFp(5, 0, 1)) == 0);
    CHECK(j_invariant(CurveOverFp(5, 1, 0)) == 1728 % 5);
    CHECK(j_invariant(CurveOverFp(5, 1, 1)) == 2);
}

TEST_CASE("rational model reduction") {
    RationalCurve eq(1, 1);
    CHECK(eq.disc == -496);
    CurveOverFp e = reduce(eq, 5);
    CHECK(e.p == 5);
    CHECK(e.a == 1);
    CHECK(e.b == 1);

    try {
        reduce(eq, 31);
        CHECK(false);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::bad_reduction);
        CHECK(std::string(err.what()).find("31") != std::string::npos);
    }
    try {
        reduce(eq, 2);
        CHECK(false);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::bad_reduction);
    }
    CHECK_THROWS_AS(RationalCurve(0, 0), Error);
    // Negative coefficients reduce into [0, p).
    CurveOverFp em = reduce(RationalCurve(-1, -1), 5);
    CHECK(em.a == 4);
    CHECK(em.b == 4);
}

TEST_CASE("trace certificate enforces its invariants") {
    CHECK_THROWS_AS(curve::TraceCertificate::from_trace(5, 5, Method::naive), Error);
    CHECK_THROWS_AS(curve::TraceCertificate::from_trace(5, -5, Method::naive), Error);
    arith::ResidueSystem bad;
    bad.entries.emplace_back(3, 1);  // -3 mod 3 = 0, not 1
    CHECK_THROWS_AS(curve::TraceCertificate::from_trace(5, -3, Method::schoof, bad), Error);
    arith::ResidueSystem good;
    good.entries.emplace_back(3, 0);
    good.entries.emplace_back(7, 4);
    TraceCertificate c = curve::TraceCertificate::from_trace(5, -3, Method::schoof, good);
    CHECK(c.n == 9);
    CHECK(c.d == -11);
}

TEST_CASE("supersingularity pinned examples") {
    Prng rng = Prng::from_seed(2006);
    CHECK(is_supersingular(CurveOverFp(5, 0, 1), rng));
    CHECK(!is_supersingular(CurveOverFp(5, 1, 1), rng));
    CHECK(!is_supersingular(CurveOverFp(7, 0, 1), rng));
}

TEST_CASE("supersingularity agrees with the naive trace") {
    Prng rng = Prng::from_seed(2007);
    int seen_super = 0;
    for (uint64_t p : {11ull, 13ull, 17ull, 19ull, 23ull}) {
        for (uint64_t b = 1; b < 6; ++b) {
            CurveOverFp e(p, 0, b);
            bool super = is_supersingular(e, rng);
            CHECK(super == (naive_count(e).t == 0));
            seen_super += super;
        }
    }
    CHECK(seen_super > 0);  // p = 2 mod 3 makes j=0 supersingular
}

}  // TEST_SUITE
