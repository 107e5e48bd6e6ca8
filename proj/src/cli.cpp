#include "sea/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sea/arith.hpp"
#include "sea/curve.hpp"
#include "sea/errors.hpp"
#include "sea/integer.hpp"
#include "sea/modpoly.hpp"
#include "sea/prng.hpp"
#include "sea/schoof.hpp"
#include "sea/sea.hpp"
#include "sea/stats.hpp"

namespace sea::cli {
namespace {

using nlohmann::json;

Integer parse_integer(const std::string& text) {
    try {
        return Integer(text);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::invalid_argument, "not a decimal integer: " + text);
    }
}

// Exact rational plus a convenience decimal rendering.
json rational_json(const Rational& q) {
    return {{"num", q.get_num().get_str()},
            {"den", q.get_den().get_str()},
            {"decimal", decimal_string(q)}};
}

// Scoped override of the modular polynomial directory, restored on exit so
// in-process callers can mix invocations with different --modpoly-dir values.
class DataDirGuard {
  public:
    explicit DataDirGuard(const std::string& dir) : active_(!dir.empty()) {
        if (active_) {
            saved_ = modpoly::data_dir();
            modpoly::set_data_dir(dir);
        }
    }
    ~DataDirGuard() {
        if (active_) modpoly::set_data_dir(saved_);
    }
    DataDirGuard(const DataDirGuard&) = delete;
    DataDirGuard& operator=(const DataDirGuard&) = delete;

  private:
    bool active_;
    std::string saved_;
};

// A closed range given either as --<name> X (meaning [X, 2X]) or as an
// explicit --<lo>/--<hi> pair; the two spellings are mutually exclusive.
struct RangeFlags {
    uint64_t shorthand = 0;
    uint64_t lo = 0;
    uint64_t hi = 0;
    std::string name, lo_name, hi_name;
    CLI::Option* opt_shorthand = nullptr;
    CLI::Option* opt_lo = nullptr;
    CLI::Option* opt_hi = nullptr;

    void attach(CLI::App* cmd, std::string n, std::string lo_n, std::string hi_n,
                const std::string& what) {
        name = std::move(n);
        lo_name = std::move(lo_n);
        hi_name = std::move(hi_n);
        opt_shorthand =
            cmd->add_option("--" + name, shorthand, what + " range [" + name + ", 2" + name + "]");
        opt_lo = cmd->add_option("--" + lo_name, lo, "smallest " + what);
        opt_hi = cmd->add_option("--" + hi_name, hi, "largest " + what);
        opt_shorthand->excludes(opt_lo)->excludes(opt_hi);
        opt_lo->needs(opt_hi);
        opt_hi->needs(opt_lo);
    }

    std::pair<uint64_t, uint64_t> resolve() const {
        if (opt_shorthand->count() > 0) {
            if (shorthand > std::numeric_limits<uint64_t>::max() / 2)
                throw Error(ErrorKind::invalid_argument, "--" + name + " overflows when doubled");
            return {shorthand, 2 * shorthand};
        }
        if (opt_lo->count() > 0) return {lo, hi};
        throw Error(ErrorKind::invalid_argument,
                    "missing range: pass --" + name + " or --" + lo_name + "/--" + hi_name);
    }
};

// Consecutive blocks [2^k, 2^(k+1)] clipped to [lo, hi].  Shared endpoints
// are powers of two, never odd primes, so no prime lands in two blocks.
std::vector<std::pair<uint64_t, uint64_t>> dyadic_blocks(uint64_t lo, uint64_t hi) {
    std::vector<std::pair<uint64_t, uint64_t>> blocks;
    uint64_t base = uint64_t{1} << (63 - static_cast<unsigned>(__builtin_clzll(lo | 1)));
    for (;;) {
        const uint64_t next = base > (std::numeric_limits<uint64_t>::max() >> 1)
                                  ? std::numeric_limits<uint64_t>::max()
                                  : base << 1;
        blocks.emplace_back(std::max(lo, base), std::min(hi, next));
        if (next >= hi) break;
        base = next;
    }
    return blocks;
}

// Output stream selection: stdout unless --out names a file.
class Sink {
  public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_)
                throw Error(ErrorKind::invalid_argument, "cannot open output file " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

  private:
    std::ofstream file_;
    std::ostream* stream_;
};

json record_json(const stats::SurveyRecord& rec) {
    return {{"p", rec.p},
            {"t", rec.t.get_str()},
            {"D", rec.d.get_str()},
            {"k", rec.k},
            {"R_elkies", rec.r_elkies},
            {"R_atkin", rec.r_atkin},
            {"R_ramified", rec.r_ramified},
            {"excluded_hit", rec.excluded_hit}};
}

json moment_json(const stats::MomentReport& m) {
    return {{"nu", m.nu},
            {"star", m.star == stats::PrimeClass::elkies ? "elkies" : "atkin"},
            {"convention",
             m.convention == stats::Convention::strict ? "strict" : "merge_ramified"},
            {"mean_moment", rational_json(m.mean_moment)},
            {"deficient_fraction", rational_json(m.deficient_fraction)}};
}

json survey_json(const stats::SurveyResult& res, bool include_records) {
    json j;
    j["pmin"] = res.pmin;
    j["pmax"] = res.pmax;
    j["lmin"] = res.lmin;
    j["lmax"] = res.lmax;
    j["k"] = res.k;
    j["count_p"] = res.records.size();
    j["skipped"] = res.skipped;
    if (include_records) {
        json arr = json::array();
        for (const auto& rec : res.records) arr.push_back(record_json(rec));
        j["records"] = std::move(arr);
    }
    json moments = json::array();
    for (const auto& m : res.moments) moments.push_back(moment_json(m));
    j["moments"] = std::move(moments);
    return j;
}

constexpr const char* kSurveyHeader = "p,t,D,k,R_elkies,R_atkin,R_ramified,excluded_hit";

void write_records_csv(std::ostream& os, const stats::SurveyResult& res) {
    for (const auto& rec : res.records)
        os << rec.p << ',' << rec.t.get_str() << ',' << rec.d.get_str() << ',' << rec.k << ','
           << rec.r_elkies << ',' << rec.r_atkin << ',' << rec.r_ramified << ','
           << (rec.excluded_hit ? 1 : 0) << '\n';
}

struct CountArgs {
    std::string a, b;
    uint64_t p = 0;
    std::string algorithm = "auto";
    uint64_t seed = 0;
    std::string modpoly_dir;
};

void cmd_count(const CountArgs& args, std::ostream& out) {
    DataDirGuard guard(args.modpoly_dir);
    if (args.p < 5 || !arith::is_prime(from_u64(args.p)))
        throw Error(ErrorKind::invalid_argument,
                    "p must be a prime > 3, got " + std::to_string(args.p));
    const curve::RationalCurve eq(parse_integer(args.a), parse_integer(args.b));
    const curve::CurveOverFp e = curve::reduce(eq, from_u64(args.p));
    const curve::TraceCertificate cert = [&] {
        if (args.algorithm == "naive") return curve::naive_count(e);
        if (args.algorithm == "schoof") {
            Prng rng = Prng::derive(args.seed, from_u64(e.p), from_u64(e.a), from_u64(e.b));
            return schoof::schoof_trace(e, rng);
        }
        SeaConfig cfg;
        cfg.seed = args.seed;
        // "sea" means the modular loop even where delegation would be cheaper.
        if (args.algorithm == "sea") cfg.naive_cutoff = 1;
        return sea_trace(e, cfg);
    }();
    json report;
    report["p"] = e.p;
    report["N"] = cert.n.get_str();
    report["t"] = cert.t.get_str();
    report["D"] = cert.d.get_str();
    report["method"] = curve::method_name(cert.method);
    json log = json::array();
    for (const auto& [m, r] : cert.residue_log.entries)
        log.push_back({{"ell", m.get_str()}, {"residue", r.get_str()}});
    report["residue_log"] = std::move(log);
    out << report.dump() << '\n';
}

struct SurveyArgs {
    std::string a, b;
    RangeFlags prange, lrange;
    uint64_t seed = 0;
    unsigned threads = 1;
    bool dyadic = false;
    bool exclude_supersingular = false;
    std::string format = "csv";
    std::string out_path;
    std::string modpoly_dir;

    stats::StatsConfig stats_config() const {
        stats::StatsConfig cfg;
        cfg.sea.seed = seed;
        cfg.threads = threads;
        cfg.include_supersingular = !exclude_supersingular;
        return cfg;
    }
};

void cmd_survey(const SurveyArgs& args, std::ostream& out) {
    DataDirGuard guard(args.modpoly_dir);
    Sink sink(args.out_path, out);
    const curve::RationalCurve eq(parse_integer(args.a), parse_integer(args.b));
    const auto [pmin, pmax] = args.prange.resolve();
    const auto [lmin, lmax] = args.lrange.resolve();
    const stats::StatsConfig cfg = args.stats_config();

    const auto blocks = args.dyadic ? dyadic_blocks(pmin, pmax)
                                    : std::vector<std::pair<uint64_t, uint64_t>>{{pmin, pmax}};
    std::vector<stats::SurveyResult> results;
    results.reserve(blocks.size());
    for (const auto& [lo, hi] : blocks)
        results.push_back(stats::survey_range(eq, lo, hi, lmin, lmax, cfg));

    if (args.format == "json") {
        if (args.dyadic) {
            json ranges = json::array();
            for (const auto& res : results) ranges.push_back(survey_json(res, true));
            sink.get() << json{{"ranges", std::move(ranges)}}.dump() << '\n';
        } else {
            sink.get() << survey_json(results.front(), true).dump() << '\n';
        }
        return;
    }
    // CSV: records for every block in ascending p, then one summary line.
    sink.get() << kSurveyHeader << '\n';
    for (const auto& res : results) write_records_csv(sink.get(), res);
    if (args.dyadic) {
        json summaries = json::array();
        for (const auto& res : results) summaries.push_back(survey_json(res, false));
        sink.get() << summaries.dump() << '\n';
    } else {
        sink.get() << survey_json(results.front(), false).dump() << '\n';
    }
}

struct CharSumArgs {
    std::string a, b;
    std::vector<uint64_t> ells;
    RangeFlags prange;
    uint64_t seed = 0;
    unsigned threads = 1;
    bool exclude_supersingular = false;
    std::string out_path;
    std::string modpoly_dir;
};

void cmd_charsum(const CharSumArgs& args, std::ostream& out) {
    DataDirGuard guard(args.modpoly_dir);
    Sink sink(args.out_path, out);
    const curve::RationalCurve eq(parse_integer(args.a), parse_integer(args.b));
    const auto [pmin, pmax] = args.prange.resolve();
    stats::StatsConfig cfg;
    cfg.sea.seed = args.seed;
    cfg.threads = args.threads;
    cfg.include_supersingular = !args.exclude_supersingular;
    const stats::CharSumReport rep = stats::char_sum_range(eq, args.ells, pmin, pmax, cfg);
    json j;
    j["ells"] = rep.ells;
    j["pmin"] = rep.pmin;
    j["pmax"] = rep.pmax;
    j["count_p"] = rep.count_p;
    j["S"] = rep.s.get_str();
    j["main_term"] = rational_json(rep.main_term);
    j["deviation"] = rational_json(rep.deviation);
    sink.get() << j.dump() << '\n';
}

struct IdentityArgs {
    std::vector<uint64_t> ells;
};

void cmd_identity(const IdentityArgs& args, std::ostream& out) {
    if (args.ells.size() != 4)
        throw Error(ErrorKind::invalid_argument,
                    "--ells takes exactly 4 odd primes, got " + std::to_string(args.ells.size()));
    if (std::set<uint64_t>(args.ells.begin(), args.ells.end()).size() != 4)
        throw Error(ErrorKind::invalid_argument, "--ells values must be distinct");
    const stats::IdentityReport rep = stats::identity_check(args.ells);
    json j;
    j["ells"] = args.ells;
    j["lhs"] = rep.lhs.get_str();
    j["rhs"] = rep.rhs.get_str();
    j["equal"] = rep.equal;
    out << j.dump() << '\n';
}

struct DiagArgs {
    std::string d;
    uint64_t big_l = 0;
};

void cmd_diag(const DiagArgs& args, std::ostream& out) {
    const stats::DiagnosticReport rep =
        stats::elkies_count_diagnostic(parse_integer(args.d), args.big_l);
    json j;
    j["D"] = rep.d.get_str();
    j["L"] = rep.big_l;
    j["R"] = rep.r;
    j["R0"] = rep.r0;
    j["threshold"] = rep.threshold;
    j["pass"] = rep.pass;
    out << j.dump() << '\n';
}

struct ModpolyValidateArgs {
    uint64_t ell = 0;
    std::string modpoly_dir;
};

void cmd_modpoly_validate(const ModpolyValidateArgs& args, std::ostream& out) {
    const std::string dir = args.modpoly_dir.empty() ? modpoly::data_dir() : args.modpoly_dir;
    // load_file runs the full validation battery; reaching the report means
    // every invariant held.
    const modpoly::ModularPolynomial phi = modpoly::load_file(args.ell, dir);
    uint32_t degree = 0;
    for (const auto& [ij, c] : phi.terms) degree = std::max(degree, ij.first);
    json j;
    j["ell"] = phi.ell;
    j["degree"] = degree;
    j["stored_terms"] = phi.terms.size();
    j["ok"] = true;
    out << j.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Point counting and Atkin/Elkies prime statistics for elliptic curves over "
                 "prime fields"};
    app.name("sea");
    app.require_subcommand(1);

    CountArgs count_args;
    CLI::App* count = app.add_subcommand("count", "Count points on y^2 = x^3 + a*x + b over F_p");
    count->add_option("-a,--a", count_args.a, "coefficient a")->required();
    count->add_option("-b,--b", count_args.b, "coefficient b")->required();
    count->add_option("-p,--p", count_args.p, "field characteristic, a prime > 3")->required();
    count->add_option("--algorithm", count_args.algorithm, "point counting algorithm")
        ->check(CLI::IsMember({"auto", "naive", "schoof", "sea"}));
    count->add_option("--seed", count_args.seed, "seed for the derived random streams");
    count->add_option("--modpoly-dir", count_args.modpoly_dir,
                      "modular polynomial directory, overrides SEA_MODPOLY_DIR");
    count->callback([&] { cmd_count(count_args, out); });

    SurveyArgs survey_args;
    CLI::App* survey = app.add_subcommand(
        "survey", "Classify window primes as Elkies/Atkin/ramified per reduction prime");
    survey->add_option("-a,--a", survey_args.a, "coefficient a")->required();
    survey->add_option("-b,--b", survey_args.b, "coefficient b")->required();
    survey_args.prange.attach(survey, "P", "pmin", "pmax", "reduction prime");
    survey_args.lrange.attach(survey, "L", "lmin", "lmax", "window prime");
    survey->add_option("--seed", survey_args.seed, "seed for the derived random streams");
    survey->add_option("--threads", survey_args.threads,
                       "worker threads; output bytes do not depend on this");
    survey->add_flag("--dyadic", survey_args.dyadic,
                     "partition the prime range into [2^k, 2^(k+1)] blocks, one summary each");
    survey->add_flag("--exclude-supersingular", survey_args.exclude_supersingular,
                     "drop primes with trace 0 instead of recording them");
    survey->add_option("--format", survey_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    survey->add_option("--out", survey_args.out_path, "output file, - for stdout");
    survey->add_option("--modpoly-dir", survey_args.modpoly_dir,
                       "modular polynomial directory, overrides SEA_MODPOLY_DIR");
    survey->callback([&] { cmd_survey(survey_args, out); });

    CharSumArgs charsum_args;
    CLI::App* charsum = app.add_subcommand(
        "charsum", "Character sum of jacobi(D_p, prod ells) against its exact main term");
    charsum->add_option("-a,--a", charsum_args.a, "coefficient a")->required();
    charsum->add_option("-b,--b", charsum_args.b, "coefficient b")->required();
    charsum->add_option("--ells", charsum_args.ells, "2 or 4 distinct odd primes")
        ->required()
        ->delimiter(',');
    charsum_args.prange.attach(charsum, "P", "pmin", "pmax", "reduction prime");
    charsum->add_option("--seed", charsum_args.seed, "seed for the derived random streams");
    charsum->add_option("--threads", charsum_args.threads,
                        "worker threads; output bytes do not depend on this");
    charsum->add_flag("--exclude-supersingular", charsum_args.exclude_supersingular,
                      "drop primes with trace 0 instead of recording them");
    charsum->add_option("--out", charsum_args.out_path, "output file, - for stdout");
    charsum->add_option("--modpoly-dir", charsum_args.modpoly_dir,
                        "modular polynomial directory, overrides SEA_MODPOLY_DIR");
    charsum->callback([&] { cmd_charsum(charsum_args, out); });

    IdentityArgs identity_args;
    CLI::App* identity = app.add_subcommand(
        "identity", "Check the exact sign-vector identity A(+1) - A(-1) = prod (-1|ell) ell");
    identity->add_option("--ells", identity_args.ells, "exactly 4 distinct odd primes")
        ->required()
        ->delimiter(',');
    identity->callback([&] { cmd_identity(identity_args, out); });

    DiagArgs diag_args;
    CLI::App* diag = app.add_subcommand(
        "diag", "Elkies prime supply for a fixed discriminant against the L/(5 ln L) floor");
    diag->add_option("--D", diag_args.d, "negative discriminant")->required();
    diag->add_option("--L", diag_args.big_l, "window bound, odd primes up to L")->required();
    diag->callback([&] { cmd_diag(diag_args, out); });

    ModpolyValidateArgs modpoly_args;
    CLI::App* modpoly_validate = app.add_subcommand(
        "modpoly-validate", "Load one modular polynomial file and run its validation battery");
    modpoly_validate->add_option("--ell", modpoly_args.ell, "odd prime level")->required();
    modpoly_validate->add_option("--modpoly-dir", modpoly_args.modpoly_dir,
                                 "modular polynomial directory, overrides SEA_MODPOLY_DIR");
    modpoly_validate->callback([&] { cmd_modpoly_validate(modpoly_args, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace sea::cli
