#include "sea/sea.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>

#include "sea/arith.hpp"
#include "sea/elkies.hpp"
#include "sea/errors.hpp"
#include "sea/poly.hpp"
#include "sea/schoof.hpp"

namespace sea {
namespace {

// Sign and twist closure of the norm-equation representations 4p = t^2 + d v^2.
// Completeness of the set, not of any single formula, is what the driver
// relies on: the true trace is always among the twist orbit.
std::set<Integer> cm_candidates(uint64_t p, int d) {
    const Integer four_p = 4 * from_u64(p);
    std::set<Integer> cand;
    auto push = [&](const Integer& t) {
        if (t * t <= four_p) {
            cand.insert(t);
            cand.insert(-t);
        }
    };
    for (const auto& [t, v] : arith::solve_norm_equation(d, four_p)) {
        push(t);
        if (d == 1) {
            push(v);
        } else {
            Integer s = t + 3 * v;
            Integer r = t - 3 * v;
            if (s % 2 == 0) push(s / 2);
            if (r % 2 == 0) push(r / 2);
        }
    }
    return cand;
}

}  // namespace

HybridAction hybrid_schedule(const HybridState& state) {
    if (state.product * state.product > 16 * state.p) return {ActionKind::stop, 0};
    if (!state.stale.empty()) {
        const uint64_t ell0 = *state.stale.begin();
        const long double lhs = powl(static_cast<long double>(state.next_ell), 0.75L);
        if (lhs > static_cast<long double>(state.hybrid_c) * static_cast<long double>(ell0))
            return {ActionKind::run_schoof, ell0};
    }
    return {ActionKind::run_elkies, state.next_ell};
}

Integer cm_disambiguate(const curve::CurveOverFp& e, const std::set<Integer>& candidates,
                        Prng& rng) {
    if (candidates.empty())
        throw Error(ErrorKind::invalid_argument, "cm_disambiguate requires a candidate trace");
    std::set<Integer> alive = candidates;
    const Integer base = from_u64(e.p) + 1;
    for (int round = 0; round < 40 && alive.size() > 1; ++round) {
        curve::Point q = curve::random_point(e, rng);
        for (auto it = alive.begin(); it != alive.end();) {
            if (curve::scalar_mul(e, base - *it, q).infinity)
                ++it;
            else
                it = alive.erase(it);
        }
    }
    // Candidates whose p + 1 - t are all multiples of the group order
    // survive every point test; a full Schoof run settles those.
    if (alive.size() == 1) return *alive.begin();
    return schoof::schoof_trace(e, rng).t;
}

uint64_t schoof_cost_model(uint64_t p) {
    // Schoof computes t mod ell working modulo psi_ell, degree (ell^2-1)/2,
    // for odd primes until the modulus product clears 4*sqrt(p).  The
    // Frobenius power dominates: about two metered multiplications per
    // exponent bit, each charging operand lengths ~ twice the degree.
    const Integer target = 16 * from_u64(p);
    Integer prod = 1;
    uint64_t bits = 64 - static_cast<uint64_t>(__builtin_clzll(p));
    uint64_t cost = 0;
    for (uint64_t ell = 3; prod * prod <= target; ell = to_u64(arith::next_prime(from_u64(ell)))) {
        if (ell == p) continue;
        prod *= static_cast<unsigned long>(ell);
        cost += 2 * bits * (ell * ell - 1);
    }
    return cost;
}

curve::TraceCertificate sea_trace(const curve::CurveOverFp& e, const SeaConfig& cfg) {
    if (!(cfg.hybrid_c > 0) || !(cfg.fallback_budget_multiplier > 0))
        throw Error(ErrorKind::invalid_argument, "sea config rates must be positive");
    if (cfg.max_ell < 3 || cfg.naive_cutoff < 1)
        throw Error(ErrorKind::invalid_argument,
                    "sea config requires max_ell >= 3 and naive_cutoff >= 1");
    const uint64_t p = e.p;
    Prng rng = Prng::derive(cfg.seed, from_u64(p), from_u64(e.a), from_u64(e.b));

    if (curve::is_supersingular(e, rng))
        return curve::TraceCertificate::from_trace(p, 0, curve::Method::supersingular);
    const uint64_t j = curve::j_invariant(e);
    if (j == 0)
        return curve::TraceCertificate::from_trace(p, cm_disambiguate(e, cm_candidates(p, 3), rng),
                                                   curve::Method::cm_j0);
    if (j == 1728 % p)
        return curve::TraceCertificate::from_trace(p, cm_disambiguate(e, cm_candidates(p, 1), rng),
                                                   curve::Method::cm_j1728);
    if (p <= cfg.naive_cutoff) return curve::naive_count(e, cfg.naive_cutoff);

    const uint64_t start_work = poly::work_counter();
    const double budget_d = cfg.fallback_budget_multiplier * static_cast<double>(schoof_cost_model(p));
    const uint64_t budget = budget_d < 1e18 ? static_cast<uint64_t>(budget_d) : uint64_t{1} << 62;

    arith::ResidueSystem residues;
    HybridState st{from_u64(p), 1, {}, 3, cfg.hybrid_c};
    if (st.next_ell == p) st.next_ell = 5;
    auto advance = [&] {
        uint64_t n = to_u64(arith::next_prime(from_u64(st.next_ell)));
        if (n == p) n = to_u64(arith::next_prime(from_u64(n)));
        st.next_ell = n;
    };
    auto record = [&](uint64_t ell, uint64_t r) {
        residues.entries.push_back({from_u64(ell), from_u64(r)});
        st.product *= static_cast<unsigned long>(ell);
    };
    bool forced = false;
    while (true) {
        HybridAction act = hybrid_schedule(st);
        if (act.kind == ActionKind::stop) break;
        if (!forced && poly::work_counter() - start_work > budget) forced = true;
        if (act.kind == ActionKind::run_elkies && (forced || act.ell > cfg.max_ell))
            act = {ActionKind::run_schoof, st.stale.empty() ? st.next_ell : *st.stale.begin()};
        if (act.kind == ActionKind::run_schoof) {
            record(act.ell, schoof::trace_mod_ell(e, act.ell, rng));
            st.stale.erase(act.ell);
            if (act.ell == st.next_ell) advance();
            continue;
        }
        const uint64_t ell = act.ell;
        if (elkies::is_elkies(e, ell, rng) == elkies::PrimeClass::atkin) {
            st.stale.insert(ell);
            advance();
            continue;
        }
        uint64_t r;
        try {
            elkies::KernelPolynomial kp = elkies::kernel_polynomial(e, ell, rng);
            r = elkies::elkies_trace(e, ell, kp);
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::degenerate_isogeny) throw;
            r = schoof::trace_mod_ell(e, ell, rng);
        }
        record(ell, r);
        advance();
    }
    Integer t = arith::crt_balanced(residues);
    return curve::TraceCertificate::from_trace(p, t, curve::Method::sea, std::move(residues));
}

}  // namespace sea
