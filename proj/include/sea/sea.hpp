#pragma once

#include <cstdint>
#include <set>

#include "sea/curve.hpp"
#include "sea/integer.hpp"
#include "sea/prng.hpp"

namespace sea {

// Knobs for the point-counting driver.  hybrid_c scales the staleness rule
// that decides when a skipped (Atkin) prime is cheap enough to clear with
// Schoof's method; +infinity disables that rule.  The fallback budget caps
// the driver's metered polynomial work at a multiple of a modeled full
// Schoof run before forcing the remaining residues through Schoof.
struct SeaConfig {
    double hybrid_c = 1.0;
    double fallback_budget_multiplier = 8.0;
    uint64_t max_ell = 997;
    uint64_t naive_cutoff = uint64_t{1} << 22;
    uint64_t seed = 0;
};

// One step of the modulus schedule: collect t mod ell by the Elkies route,
// clear the cheapest stale prime with Schoof, or stop and recover t by CRT.
enum class ActionKind { run_elkies, run_schoof, stop };

struct HybridAction {
    ActionKind kind;
    uint64_t ell = 0;  // meaningful for run_elkies and run_schoof

    friend bool operator==(const HybridAction&, const HybridAction&) = default;
};

struct HybridState {
    Integer p;
    Integer product;           // product of moduli with known residues
    std::set<uint64_t> stale;  // Atkin primes awaiting a Schoof pass
    uint64_t next_ell = 3;     // next untried odd prime != p
    double hybrid_c = 1.0;
};

// Pure scheduling rule: stop once product^2 > 16p (the residues pin t in the
// Hasse window); otherwise clear ell0 = min(stale) with Schoof as soon as
// next_ell^(3/4) > hybrid_c * ell0; otherwise try the next prime as Elkies.
HybridAction hybrid_schedule(const HybridState& state);

// The unique candidate trace t such that p + 1 - t kills enough random
// points to eliminate every other candidate.  Candidates that survive 40
// points (multiples of the true order can be indistinguishable) are settled
// by a full Schoof run, so the answer is total and exact.
Integer cm_disambiguate(const curve::CurveOverFp& e, const std::set<Integer>& candidates,
                        Prng& rng);

// Modeled meter cost (poly::work_counter units) of a full Schoof run at p:
// the yardstick for the fallback budget.
uint64_t schoof_cost_model(uint64_t p);

// Frobenius trace by the fastest applicable route: supersingular and CM
// special cases first, exhaustive counting up to cfg.naive_cutoff, then the
// Elkies main loop with the hybrid schedule and Schoof fallbacks.  All
// randomness derives from (cfg.seed, p, a, b), so the certificate is a pure
// function of curve and config.
curve::TraceCertificate sea_trace(const curve::CurveOverFp& e, const SeaConfig& cfg = {});

}  // namespace sea
