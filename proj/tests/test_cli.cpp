#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sea/arith.hpp"
#include "sea/cli.hpp"
#include "sea/integer.hpp"
#include "sea/stats.hpp"

using namespace sea;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("sea");
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

json last_line_json(const std::string& text) {
    std::string last;
    for (const auto& line : lines(text))
        if (!line.empty()) last = line;
    return json::parse(last);
}

constexpr const char* kHeader = "p,t,D,k,R_elkies,R_atkin,R_ramified,excluded_hit";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("count agrees across algorithms on the pinned curve") {
    const auto naive = run({"count", "-a", "1", "-b", "1", "-p", "5", "--algorithm", "naive"});
    REQUIRE(naive.code == 0);
    const json jn = last_line_json(naive.out);
    CHECK(jn["p"] == 5);
    CHECK(jn["N"] == "9");
    CHECK(jn["t"] == "-3");
    CHECK(jn["D"] == "-11");
    CHECK(jn["method"] == "naive");
    CHECK(jn["residue_log"].empty());

    const auto schoof = run({"count", "-a", "1", "-b", "1", "-p", "5", "--algorithm", "schoof"});
    REQUIRE(schoof.code == 0);
    const json js = last_line_json(schoof.out);
    CHECK(js["N"] == jn["N"]);
    CHECK(js["t"] == jn["t"]);
    CHECK(js["method"] == "schoof");
    CHECK(!js["residue_log"].empty());
}

TEST_CASE("count picks the CM shortcut for j = 0") {
    const auto res = run({"count", "-a", "0", "-b", "1", "-p", "7"});
    REQUIRE(res.code == 0);
    const json j = last_line_json(res.out);
    CHECK(j["N"] == "12");
    CHECK(j["t"] == "-4");
    CHECK(j["method"] == "cm-j0");
}

TEST_CASE("count --algorithm sea forces the modular loop") {
    const auto naive = run({"count", "-a", "2", "-b", "3", "-p", "1009", "--algorithm", "naive"});
    const auto sea_run = run({"count", "-a", "2", "-b", "3", "-p", "1009", "--algorithm", "sea"});
    REQUIRE(naive.code == 0);
    REQUIRE(sea_run.code == 0);
    const json jn = last_line_json(naive.out);
    const json js = last_line_json(sea_run.out);
    CHECK(js["N"] == jn["N"]);
    CHECK(js["t"] == jn["t"]);
    CHECK(js["method"] == "sea");
    REQUIRE(!js["residue_log"].empty());
    const Integer t(js["t"].get<std::string>());
    for (const auto& entry : js["residue_log"]) {
        const Integer ell(entry["ell"].get<std::string>());
        Integer lifted = t % ell;
        if (lifted < 0) lifted += ell;
        CHECK(lifted == Integer(entry["residue"].get<std::string>()));
    }
}

TEST_CASE("count rejects unusable arguments with exit 2") {
    CHECK(run({"count", "-a", "1", "-b", "1", "-p", "10"}).code == 2);
    CHECK(run({"count", "-a", "1", "-b", "1", "-p", "3"}).code == 2);
    CHECK(run({"count", "-a", "1", "-b", "1"}).code == 2);
    CHECK(run({"count", "-a", "x", "-b", "1", "-p", "5"}).code == 2);
    CHECK(run({"count", "-a", "1", "-b", "1", "-p", "5", "--algorithm", "magic"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("count maps library failures to the exit code contract") {
    // disc(x^3 + x + 1) = -16*31, so reduction mod 31 is singular
    const auto bad = run({"count", "-a", "1", "-b", "1", "-p", "31"});
    CHECK(bad.code == 5);
    CHECK(bad.err.find("bad reduction") != std::string::npos);

    const uint64_t over = to_u64(arith::next_prime(from_u64(uint64_t{1} << 22)));
    CHECK(run({"count", "-a", "1", "-b", "1", "-p", std::to_string(over), "--algorithm",
               "naive"}).code == 4);
}

TEST_CASE("help exits 0 and prints usage") {
    const auto res = run({"--help"});
    CHECK(res.code == 0);
    CHECK(res.out.find("Usage") != std::string::npos);
}

TEST_CASE("survey single-prime range reproduces the classify row") {
    const auto res = run({"survey", "-a", "1", "-b", "1", "--pmin", "5", "--pmax", "5",
                          "--L", "10"});
    REQUIRE(res.code == 0);
    const auto rows = lines(res.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == kHeader);
    CHECK(rows[1] == "5,-3,-11,4,0,3,1,0");
    const json summary = json::parse(rows[2]);
    CHECK(summary["k"] == 4);
    CHECK(summary["count_p"] == 1);
    CHECK(summary["skipped"] == 0);
    CHECK(summary["moments"].size() == 8);
    CHECK(!summary.contains("records"));
}

TEST_CASE("survey output is byte-identical across thread counts and reruns") {
    const std::vector<std::string> base{"survey", "-a", "1", "-b", "1", "--P", "200",
                                        "--L", "10", "--seed", "7"};
    auto with_threads = [&](const char* n) {
        auto args = base;
        args.insert(args.end(), {"--threads", n});
        return run(args);
    };
    const auto one = with_threads("1");
    const auto eight = with_threads("8");
    const auto again = with_threads("1");
    REQUIRE(one.code == 0);
    CHECK(one.out == eight.out);
    CHECK(one.out == again.out);
}

TEST_CASE("survey dyadic blocks partition the plain range") {
    const std::vector<std::string> common{"-a", "1", "-b", "1", "--pmin", "5", "--pmax", "40",
                                          "--L", "10"};
    auto plain_args = common;
    plain_args.insert(plain_args.begin(), "survey");
    auto dyadic_args = plain_args;
    dyadic_args.push_back("--dyadic");
    const auto plain = run(plain_args);
    const auto dyadic = run(dyadic_args);
    REQUIRE(plain.code == 0);
    REQUIRE(dyadic.code == 0);

    auto body = [](const CliResult& res) {
        auto rows = lines(res.out);
        rows.erase(rows.begin());  // header
        rows.pop_back();           // summary
        return rows;
    };
    CHECK(body(plain) == body(dyadic));

    const json blocks = last_line_json(dyadic.out);
    REQUIRE(blocks.is_array());
    REQUIRE(blocks.size() == 4);
    CHECK(blocks[0]["pmin"] == 5);
    CHECK(blocks[0]["pmax"] == 8);
    CHECK(blocks[3]["pmin"] == 32);
    CHECK(blocks[3]["pmax"] == 40);
    uint64_t total = 0;
    for (const auto& b : blocks) {
        CHECK(b["k"] == 4);
        total += b["count_p"].get<uint64_t>();
    }
    CHECK(total == last_line_json(plain.out)["count_p"].get<uint64_t>());
}

TEST_CASE("survey json format embeds the records") {
    const auto res = run({"survey", "-a", "1", "-b", "1", "--pmin", "5", "--pmax", "5",
                          "--L", "10", "--format", "json"});
    REQUIRE(res.code == 0);
    const json j = json::parse(res.out);
    REQUIRE(j["records"].size() == 1);
    const json& rec = j["records"][0];
    CHECK(rec["p"] == 5);
    CHECK(rec["t"] == "-3");
    CHECK(rec["D"] == "-11");
    CHECK(rec["R_elkies"] == 0);
    CHECK(rec["R_atkin"] == 3);
    CHECK(rec["R_ramified"] == 1);
    CHECK(rec["excluded_hit"] == false);
    CHECK(j["moments"].size() == 8);
}

TEST_CASE("survey --out writes the same bytes to a file") {
    const auto path = std::filesystem::temp_directory_path() / "sea_cli_survey_out.csv";
    const auto direct = run({"survey", "-a", "1", "-b", "1", "--P", "40", "--L", "10"});
    const auto filed = run({"survey", "-a", "1", "-b", "1", "--P", "40", "--L", "10",
                            "--out", path.string()});
    REQUIRE(direct.code == 0);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == direct.out);
    std::filesystem::remove(path);
}

TEST_CASE("survey can drop supersingular reductions") {
    const std::vector<std::string> base{"survey", "-a", "1", "-b", "1", "--pmin", "5",
                                        "--pmax", "40", "--L", "10"};
    auto excluded_args = base;
    excluded_args.push_back("--exclude-supersingular");
    const auto with_ss = run(base);
    const auto without_ss = run(excluded_args);
    REQUIRE(with_ss.code == 0);
    REQUIRE(without_ss.code == 0);
    // p = 17 is the one supersingular reduction of x^3 + x + 1 in [5, 40]
    CHECK(with_ss.out.find("17,0,") != std::string::npos);
    CHECK(without_ss.out.find("17,0,") == std::string::npos);
    CHECK(lines(with_ss.out).size() == lines(without_ss.out).size() + 1);
    CHECK(last_line_json(with_ss.out)["skipped"] == 1);
    CHECK(last_line_json(without_ss.out)["skipped"] == 2);
}

TEST_CASE("survey rejects conflicting or missing ranges") {
    CHECK(run({"survey", "-a", "1", "-b", "1", "--P", "10", "--pmin", "5", "--pmax", "9",
               "--L", "10"}).code == 2);
    CHECK(run({"survey", "-a", "1", "-b", "1", "--L", "10"}).code == 2);
    CHECK(run({"survey", "-a", "1", "-b", "1", "--P", "10", "--lmin", "3"}).code == 2);
    CHECK(run({"survey", "-a", "1", "-b", "1", "--pmin", "9", "--pmax", "5",
               "--L", "10"}).code == 2);
}

TEST_CASE("charsum matches the library on the pinned window") {
    const auto res = run({"charsum", "-a", "1", "-b", "1", "--ells", "3,5", "--P", "100"});
    REQUIRE(res.code == 0);
    const json j = last_line_json(res.out);
    CHECK(j["count_p"] == 21);
    CHECK(j["S"] == "2");
    CHECK(j["main_term"]["num"] == "-7");
    CHECK(j["main_term"]["den"] == "64");

    const curve::RationalCurve eq(Integer(1), Integer(1));
    const stats::CharSumReport rep = stats::char_sum(eq, {3, 5}, 100);
    CHECK(Integer(j["S"].get<std::string>()) == rep.s);
    CHECK(j["deviation"]["num"] == rep.deviation.get_num().get_str());

    CHECK(run({"charsum", "-a", "1", "-b", "1", "--ells", "3,5,7", "--P", "100"}).code == 2);
    CHECK(run({"charsum", "-a", "1", "-b", "1", "--ells", "3,3", "--P", "100"}).code == 2);
    CHECK(run({"charsum", "-a", "1", "-b", "1", "--ells", "2,5", "--P", "100"}).code == 2);
}

TEST_CASE("identity pins both spot values") {
    const auto small = run({"identity", "--ells", "3,5,7,11"});
    REQUIRE(small.code == 0);
    const json js = last_line_json(small.out);
    CHECK(js["lhs"] == "-1155");
    CHECK(js["rhs"] == "-1155");
    CHECK(js["equal"] == true);

    const auto large = run({"identity", "--ells", "5,13,17,29"});
    REQUIRE(large.code == 0);
    const json jl = last_line_json(large.out);
    CHECK(jl["lhs"] == "32045");
    CHECK(jl["equal"] == true);

    CHECK(run({"identity", "--ells", "3,5,7"}).code == 2);
    CHECK(run({"identity", "--ells", "3,5,7,7"}).code == 2);
    CHECK(run({"identity", "--ells", "3,5,7,9"}).code == 2);
}

TEST_CASE("diag pins the discriminant -11 example") {
    const auto res = run({"diag", "--D", "-11", "--L", "20"});
    REQUIRE(res.code == 0);
    const json j = last_line_json(res.out);
    CHECK(j["D"] == "-11");
    CHECK(j["L"] == 20);
    CHECK(j["R"] == 2);
    CHECK(j["R0"] == 1);
    CHECK(j["pass"] == true);
    CHECK(j["threshold"].get<double>() == doctest::Approx(20.0 / (5.0 * std::log(20.0))));

    CHECK(run({"diag", "--D", "11", "--L", "20"}).code == 2);
}

TEST_CASE("modpoly-validate reports the degree and maps failures") {
    const auto ok = run({"modpoly-validate", "--ell", "3"});
    REQUIRE(ok.code == 0);
    const json j = last_line_json(ok.out);
    CHECK(j["ell"] == 3);
    CHECK(j["degree"] == 4);
    CHECK(j["ok"] == true);

    CHECK(run({"modpoly-validate", "--ell", "997"}).code == 3);
    CHECK(run({"modpoly-validate", "--ell", "4"}).code == 2);
}

}  // TEST_SUITE
