#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qfa/cli.hpp"

using namespace qfa;
using qfa::cli::parse_args;
using qfa::cli::run_cli;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("parse_args: epsilon") {
    const auto cfg = parse_args({"epsilon", "--p", "1523", "--eps", "0.1", "--g", "948"});
    CHECK(cfg.command == "epsilon");
    CHECK(cfg.p == 1523);
    CHECK(cfg.eps == 0.1);
    CHECK(cfg.g == 948);
    CHECK(cfg.master_seed == qfa::cli::k_default_master_seed);
    CHECK(cfg.format == "csv");
    CHECK(cfg.threads == 1);
}

TEST_CASE("parse_args: rejects bad input") {
    CHECK_THROWS_AS(parse_args({"epsilon", "--p", "1524", "--eps", "0.1", "--g", "948"}),
                    std::invalid_argument);   // 1524 is even
    CHECK_THROWS_AS(parse_args({"epsilon", "--p", "1523", "--eps", "1.5", "--g", "948"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_args({"epsilon", "--p", "1523", "--eps", "0.1", "--g", "4"}),
                    std::invalid_argument);   // 4 is not a primitive root mod 1523? (4 = 2^2 is a square)
    CHECK_THROWS(parse_args({"nonsense"}));
    CHECK_THROWS(parse_args({}));
    CHECK_THROWS(parse_args({"epsilon", "--p", "1523"}));   // --g missing
}

TEST_CASE("parse_args: table1 round trip") {
    const auto cfg = parse_args({"table1", "--eps", "0.1", "--p-list", "1523,2689", "--g-list",
                                 "948,656", "--trials", "5000", "--seed", "42"});
    CHECK(cfg.command == "table1");
    CHECK(cfg.p_list == std::vector<u64>{1523, 2689});
    CHECK(cfg.g_list == std::vector<u64>{948, 656});
    CHECK(cfg.trials == 5000);
    CHECK(cfg.master_seed == 42);

    // defaults: the nine built-in pairs
    const auto defaults = parse_args({"table1"});
    CHECK(defaults.p_list.size() == 9);
    CHECK(defaults.g_list.size() == 9);
    CHECK(defaults.trials == 5000);

    CHECK_THROWS(parse_args({"table1", "--p-list", "1523"}));   // g-list missing
    CHECK_THROWS(parse_args({"table1", "--p-list", "1523,2689", "--g-list", "948"}));
}

TEST_CASE("cli epsilon emits the expected row") {
    const auto res = invoke({"epsilon", "--p", "1523", "--eps", "0.1", "--g", "948"});
    CHECK(res.code == 0);
    CHECK(res.err.empty());
    CHECK(res.out.substr(0, res.out.find('\n')) == "p,eps,d,g,eps_g,worst_j,max_abs_cos_sum");
    CHECK(res.out.find("1523,0.1,161,948,0.0151696,") != std::string::npos);
}

TEST_CASE("cli rejects a non-prime modulus") {
    const auto res = invoke({"epsilon", "--p", "1524", "--eps", "0.1", "--g", "948"});
    CHECK(res.code == 1);
    CHECK(res.err.find("not prime") != std::string::npos);
}

TEST_CASE("cli simulate cross-checks the oracle") {
    const auto res =
        invoke({"simulate", "--p", "5", "--ks", "1,2", "--j", "1", "--format", "json"});
    CHECK(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["rows"][0]["closed_form"].get<double>() == 0.0625);
    CHECK(doc["rows"][0]["oracle"].get<double>() == Catch::Approx(0.0625).margin(1e-9));
    CHECK(doc["rows"][0]["abs_diff"].get<double>() < 1e-9);
    CHECK(doc["metadata"]["command"] == "simulate");

    const auto fast = invoke({"simulate", "--p", "5", "--ks", "1,2", "--j", "1", "--format",
                              "json", "--fast-power-oracle"});
    const auto doc2 = nlohmann::json::parse(fast.out);
    CHECK(doc2["rows"][0]["abs_diff"].get<double>() < 1e-9);
}

TEST_CASE("cli mingen emits the published minimum") {
    const auto res = invoke({"mingen", "--p", "5", "--eps", "0.5"});
    CHECK(res.code == 0);
    CHECK(res.out.substr(0, res.out.find('\n')) == "p,eps,d,g_min,eps_g_min");
    CHECK(res.out.find("5,0.5,10,2,0.0625") != std::string::npos);
}

TEST_CASE("cli hypothesis clean pass exits 0 with empty counterexample list") {
    const auto res = invoke({"hypothesis", "--p-max", "31", "--all-d"});
    CHECK(res.code == 0);
    CHECK(res.out == "p,g,d,j,cos_sum,threshold\n");   // header only
}

TEST_CASE("cli hypothesis json carries the scan summary") {
    const auto res =
        invoke({"hypothesis", "--p-max", "31", "--all-d", "--format", "json"});
    CHECK(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["rows"].empty());
    CHECK(doc["metadata"]["summary"]["counterexamples"] == "0");
    CHECK(doc["metadata"]["summary"]["primes_checked"] == "11");
}

TEST_CASE("cli writes to a file") {
    const std::string path = "cli_test_output.csv";
    std::remove(path.c_str());
    const auto res = invoke({"epsilon", "--p", "5", "--eps", "0.5", "--g", "2", "--output", path});
    CHECK(res.code == 0);
    CHECK(res.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "p,eps,d,g,eps_g,worst_j,max_abs_cos_sum");
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("cli reruns are byte-identical across thread counts") {
    const std::vector<std::string> base{"table1",  "--p-list", "101",  "--g-list", "2",
                                        "--trials", "50",       "--seed", "42"};
    auto with_threads = [&](const char* n) {
        auto args = base;
        args.push_back("--threads");
        args.push_back(n);
        return invoke(std::move(args));
    };
    const auto a = with_threads("1");
    const auto b = with_threads("8");
    const auto c = with_threads("1");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);

    // json view too
    auto args_json = base;
    args_json.insert(args_json.end(), {"--format", "json", "--threads", "8"});
    auto args_json1 = base;
    args_json1.insert(args_json1.end(), {"--format", "json", "--threads", "1"});
    CHECK(invoke(args_json).out == invoke(args_json1).out);
}

TEST_CASE("cli --d override records a warning") {
    const auto res = invoke({"epsilon", "--p", "101", "--eps", "0.3", "--d", "25", "--g", "2",
                             "--format", "json"});
    CHECK(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["rows"][0]["d"] == 25);
    REQUIRE(doc["metadata"]["warnings"].size() == 1);
    const std::string w = doc["metadata"]["warnings"][0];
    CHECK(w.find("overrides") != std::string::npos);
}

TEST_CASE("cli precision full emits round-trippable values") {
    const auto res = invoke({"epsilon", "--p", "1523", "--eps", "0.1", "--g", "948",
                             "--precision", "full", "--format", "json"});
    const auto doc = nlohmann::json::parse(res.out);
    const double eps_g = doc["rows"][0]["eps_g"].get<double>();
    const auto pm = PrimeModulus::create(1523);
    CHECK(eps_g == worst_case_epsilon(cyclic_sequence(948, pm, 161)).worst_eps);
}

TEST_CASE("cli aikps reports the construction") {
    const auto res = invoke({"aikps", "--p", "1523", "--eps-a", "1", "--format", "json"});
    CHECK(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["rows"][0]["num_primes_r"] == 7);
    CHECK(doc["rows"][0]["s_max"] == 394);
    CHECK(doc["rows"][0]["t_size"] > 0);
    CHECK(doc["rows"][0]["ratio"].get<double>() > 0.0);
}

TEST_CASE("cli random-rate") {
    const auto res = invoke({"random-rate", "--p", "101", "--eps", "0.3", "--trials", "200"});
    CHECK(res.code == 0);
    CHECK(res.out.substr(0, res.out.find('\n')) ==
          "p,eps,d,trials,successes,success_rate,ci_half_width,union_bound");
}

TEST_CASE("cli azuma") {
    const auto res = invoke({"azuma", "--p", "101", "--d", "20", "--lambdas", "0,5", "--trials",
                             "1000", "--format", "json"});
    CHECK(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["lambda"] == 0.0);
    CHECK(doc["rows"][0]["ok"] == true);
}

TEST_CASE("cli compare") {
    const auto res = invoke({"compare", "--p-list", "101", "--eps-list", "0.3",
                             "--gens-per-instance", "2", "--trials", "5", "--format", "json"});
    CHECK(res.code == 0);
    const auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["metadata"]["summary"].contains("win_fraction"));
}

TEST_CASE("cli help exits 0") {
    const auto res = invoke({"--help"});
    CHECK(res.code == 0);
    CHECK(res.out.find("epsilon") != std::string::npos);
}

TEST_CASE("a hypothesis report with rows maps to exit code 2") {
    auto cfg = parse_args({"hypothesis", "--p-max", "31"});
    Report rep = qfa::cli::execute(cfg);
    CHECK(qfa::cli::exit_code_for(cfg, rep) == 0);
    rep.rows.push_back({u64{7}, u64{3}, u64{2}, u64{1}, -1.0, 0.5});
    CHECK(qfa::cli::exit_code_for(cfg, rep) == 2);

    auto other = parse_args({"mingen", "--p", "5", "--eps", "0.5"});
    const Report mg = qfa::cli::execute(other);
    CHECK(qfa::cli::exit_code_for(other, mg) == 0);
}
