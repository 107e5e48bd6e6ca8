#include <doctest.h>

#include <limits>
#include <set>

#include "sea/arith.hpp"
#include "sea/curve.hpp"
#include "sea/errors.hpp"
#include "sea/fp.hpp"
#include "sea/schoof.hpp"
#include "sea/sea.hpp"

using namespace sea;

namespace {

// Drop the naive cutoff so small primes exercise the modular main loop.
SeaConfig loop_config(uint64_t seed = 0) {
    SeaConfig cfg;
    cfg.naive_cutoff = 1;
    cfg.seed = seed;
    return cfg;
}

curve::CurveOverFp random_curve(uint64_t p, Prng& rng) {
    while (true) {
        uint64_t a = rng.below(p);
        uint64_t b = rng.below(p);
        uint64_t disc = fp::add(fp::mul(4, fp::pow(a, 3, p), p),
                                fp::mul(27, fp::mul(b, b, p), p), p);
        if (disc != 0) return curve::CurveOverFp(p, a, b);
    }
}

void check_certificate(const curve::TraceCertificate& cert, const Integer& expected_t) {
    CHECK(cert.t == expected_t);
    CHECK(cert.n == from_u64(cert.p) + 1 - cert.t);
    CHECK(cert.t * cert.t <= 4 * from_u64(cert.p));
    for (const auto& [m, r] : cert.residue_log.entries) {
        Integer lifted = cert.t % m;
        if (lifted < 0) lifted += m;
        CHECK(lifted == r % m);
    }
}

}  // namespace

TEST_SUITE("sea") {

TEST_CASE("special cases pinned on tiny curves") {
    SeaConfig cfg;
    auto ss = sea_trace(curve::CurveOverFp(5, 0, 1), cfg);
    CHECK(ss.t == 0);
    CHECK(ss.method == curve::Method::supersingular);

    auto cm = sea_trace(curve::CurveOverFp(5, 1, 0), cfg);
    CHECK(cm.t == 2);
    CHECK(cm.method == curve::Method::cm_j1728);
    CHECK(cm.n == 4);

    auto plain = sea_trace(curve::CurveOverFp(5, 1, 1), cfg);
    CHECK(plain.t == -3);
    CHECK(plain.method == curve::Method::naive);
}

TEST_CASE("cm candidates come from the norm equation") {
    // 4*5 = 20 = 4 + 16 gives {2, 4} up to sign for j = 1728.
    auto sols = arith::solve_norm_equation(1, from_u64(20));
    std::set<Integer> seen;
    for (const auto& [t, v] : sols) {
        seen.insert(t);
        seen.insert(v);
    }
    CHECK(seen == std::set<Integer>{2, 4});
}

TEST_CASE("cm disambiguation pinned examples") {
    Prng rng = Prng::from_seed(60);
    curve::CurveOverFp e(5, 1, 0);  // N = 4
    CHECK(cm_disambiguate(e, {Integer(2), Integer(-2), Integer(4), Integer(-4)}, rng) == 2);
    CHECK(cm_disambiguate(e, {Integer(-4)}, rng) == -4);

    curve::CurveOverFp e7(7, 0, 1);  // N = 12
    std::set<Integer> cand{1, -1, 4, -4, 5, -5};
    CHECK(cm_disambiguate(e7, cand, rng) == -4);

    CHECK_THROWS_AS(cm_disambiguate(e, {}, rng), const Error&);
}

TEST_CASE("hybrid schedule rule on pinned states") {
    HybridState fresh{from_u64(101), 2, {}, 3, 1.0};
    CHECK(hybrid_schedule(fresh) == HybridAction{ActionKind::run_elkies, 3});

    // 5^(3/4) ~ 3.34 > 1 * 3, so the stale prime is cleared first.
    HybridState stale3{from_u64(101), 2, {3}, 5, 1.0};
    CHECK(hybrid_schedule(stale3) == HybridAction{ActionKind::run_schoof, 3});

    // Disabling the rule leaves the stale set alone.
    stale3.hybrid_c = std::numeric_limits<double>::infinity();
    CHECK(hybrid_schedule(stale3) == HybridAction{ActionKind::run_elkies, 5});

    // Product 21 beats 4*sqrt(5) ~ 8.94.
    HybridState done{from_u64(5), 21, {}, 11, 1.0};
    CHECK(hybrid_schedule(done).kind == ActionKind::stop);
}

TEST_CASE("config validation") {
    curve::CurveOverFp e(101, 2, 3);
    SeaConfig bad;
    bad.hybrid_c = 0;
    CHECK_THROWS_AS(sea_trace(e, bad), const Error&);
    bad = SeaConfig{};
    bad.max_ell = 2;
    CHECK_THROWS_AS(sea_trace(e, bad), const Error&);
    bad = SeaConfig{};
    bad.naive_cutoff = 0;
    CHECK_THROWS_AS(sea_trace(e, bad), const Error&);
}

TEST_CASE("main loop agrees with naive and schoof on a sweep") {
    Prng rng = Prng::from_seed(61);
    SeaConfig cfg = loop_config();
    int checked = 0;
    while (checked < 30) {
        uint64_t p = to_u64(arith::next_prime(from_u64(40 + rng.below(3000))));
        curve::CurveOverFp e = random_curve(p, rng);
        auto cert = sea_trace(e, cfg);
        auto naive = curve::naive_count(e);
        check_certificate(cert, naive.t);
        if (cert.method == curve::Method::sea) {
            Prng srng = Prng::from_seed(62);
            CHECK(schoof::schoof_trace(e, srng).t == naive.t);
            CHECK(cert.residue_log.entries.size() >= 2);
        }
        ++checked;
    }
}

TEST_CASE("fixed seed gives identical certificates") {
    SeaConfig cfg = loop_config(12345);
    curve::CurveOverFp e(3037, 11, 17);
    auto one = sea_trace(e, cfg);
    auto two = sea_trace(e, cfg);
    CHECK(one.t == two.t);
    CHECK(one.method == two.method);
    REQUIRE(one.residue_log.entries.size() == two.residue_log.entries.size());
    for (size_t i = 0; i < one.residue_log.entries.size(); ++i) {
        CHECK(one.residue_log.entries[i].first == two.residue_log.entries[i].first);
        CHECK(one.residue_log.entries[i].second == two.residue_log.entries[i].second);
    }
}

TEST_CASE("fallback budget forces schoof residues") {
    // A tiny budget multiplier trips immediately, so every residue after
    // ell = 2 must come from the Schoof path; the trace stays exact.
    SeaConfig cfg = loop_config();
    cfg.fallback_budget_multiplier = 1e-9;
    curve::CurveOverFp e(1009, 4, 9);
    auto cert = sea_trace(e, cfg);
    check_certificate(cert, curve::naive_count(e).t);
    CHECK(cert.method == curve::Method::sea);
}

TEST_CASE("max_ell exhaustion reverts to schoof") {
    SeaConfig cfg = loop_config();
    cfg.max_ell = 3;
    cfg.hybrid_c = std::numeric_limits<double>::infinity();
    curve::CurveOverFp e(1009, 4, 9);
    auto cert = sea_trace(e, cfg);
    check_certificate(cert, curve::naive_count(e).t);
}

TEST_CASE("hybrid disabled still terminates and stays exact") {
    Prng rng = Prng::from_seed(63);
    SeaConfig cfg = loop_config();
    cfg.hybrid_c = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 8; ++i) {
        uint64_t p = to_u64(arith::next_prime(from_u64(500 + rng.below(2000))));
        curve::CurveOverFp e = random_curve(p, rng);
        check_certificate(sea_trace(e, cfg), curve::naive_count(e).t);
    }
}

TEST_CASE("every prime through 500 matches naive on the cm families") {
    SeaConfig cfg;  // default config: the special-case paths fire before naive
    for (uint64_t p = 5; p <= 500; p = to_u64(arith::next_prime(from_u64(p)))) {
        for (auto [a, b] : {std::pair<uint64_t, uint64_t>{0, 1}, {1, 0}}) {
            curve::CurveOverFp e(p, a, b);
            auto cert = sea_trace(e, cfg);
            CHECK(cert.t == curve::naive_count(e).t);
            CHECK(cert.method != curve::Method::naive);
        }
    }
}

TEST_CASE("medium prime certificate cross-checks schoof") {
    SeaConfig cfg;
    cfg.naive_cutoff = 1;
    uint64_t p = 1000003;
    curve::CurveOverFp e(p, 2, 3);
    auto cert = sea_trace(e, cfg);
    Prng rng = Prng::from_seed(64);
    CHECK(cert.t == schoof::schoof_trace(e, rng).t);
    CHECK(cert.method == curve::Method::sea);
    check_certificate(cert, cert.t);
}

}  // TEST_SUITE("sea")
