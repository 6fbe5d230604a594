#pragma once

// Command-line front end. Subcommands map one-to-one onto the experiment
// drivers; output is a CSV table or a JSON document with full metadata.
//
// Exit codes: 0 success, 1 usage or runtime error, 2 hypothesis scan
// found a counterexample (so CI sweeps can trap it).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfa/acceptance.hpp"
#include "qfa/experiments.hpp"
#include "qfa/numtheory.hpp"
#include "qfa/report.hpp"
#include "qfa/sequences.hpp"
#include "qfa/simulator.hpp"

namespace qfa::cli {

/// Reports are reproducible by default: reruns with the same seed are
/// byte-identical, and this documented constant is the seed unless
/// overridden with --seed.
inline constexpr u64 k_default_master_seed = 42;

/// Built-in benchmark pairs (p, g) used by `table1` when no explicit
/// lists are given.
struct BenchPair {
    u64 p;
    u64 g;
};
inline constexpr BenchPair k_table1_defaults[] = {
    {1523, 948},  {2689, 656},  {3671, 2134}, {4093, 772},  {5861, 2190},
    {6247, 406},  {7481, 6978}, {8581, 5567}, {9883, 1260},
};

/// Default generator list for `table2` at p = 9059.
inline constexpr u64 k_table2_default_gens[] = {102,  103,  105,  106,  110,
                                                1545, 1546, 1549, 1552, 1553,
                                                9023, 9033, 9034, 9036, 9039};

struct RunConfig {
    std::string command;

    u64 p = 0;
    double eps = 0.1;
    bool eps_given = false;
    std::int64_t d_override = -1;   // -1: derive from eps
    u64 g = 0;
    u64 j = 0;
    std::vector<u64> ks;            // simulate: explicit sequence
    std::vector<u64> p_list;
    std::vector<u64> g_list;
    std::vector<double> eps_list;
    std::vector<double> lambdas{20.0, 40.0, 51.0};
    u64 p_min = 2;
    u64 p_max = 0;
    bool all_d = false;
    double eps_a = 1.0;
    std::size_t trials = 0;         // 0: per-command default applied after parse
    std::size_t gens_per_instance = 3;

    u64 master_seed = k_default_master_seed;
    unsigned threads = 1;
    std::string format = "csv";
    std::string output = "-";
    int precision = 6;              // <= 0 means full precision
    bool timing = false;
    bool exclude_zero_k = false;
    bool unrounded_threshold = false;
    bool fast_power_oracle = false;
    bool allow_any_g = false;

    std::vector<std::string> warnings;
};

namespace detail {

inline constexpr const char* k_app_description =
    "Space-efficient quantum automata for divisibility languages: "
    "construction, simulation and parameter-sequence experiments";

inline void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.master_seed, "Master seed (default 42)");
    cmd->add_option("--threads", cfg.threads,
                    "Worker threads (results are thread-count independent)");
    cmd->add_option("--format", cfg.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", cfg.output, "Output path, or - for stdout");
    cmd->add_option(
        "--precision",
        [&cfg](const std::vector<std::string>& vals) {
            if (vals[0] == "full") {
                cfg.precision = 0;
                return true;
            }
            try {
                cfg.precision = std::stoi(vals[0]);
            } catch (...) {
                return false;
            }
            return cfg.precision > 0;
        },
        "Significant digits for real numbers, or 'full'");
    cmd->add_flag("--timing", cfg.timing,
                  "Record real elapsed time (breaks byte-identical reruns)");
}

inline void build_app(CLI::App& app, RunConfig& cfg) {
    app.require_subcommand(1);

    auto* c_eps = app.add_subcommand("epsilon", "Worst-case acceptance of one cyclic sequence");
    c_eps->add_option("--p", cfg.p, "Prime modulus")->required();
    c_eps->add_option("--eps", cfg.eps, "Target error bound in (0,1)");
    c_eps->add_option("--d", cfg.d_override, "Explicit sequence length (overrides --eps)");
    c_eps->add_option("--g", cfg.g, "Sequence generator")->required();
    c_eps->add_flag("--allow-any-g", cfg.allow_any_g, "Skip the primitive-root check");

    auto* c_sim = app.add_subcommand(
        "simulate", "Cross-check the closed form against the state-vector oracle");
    c_sim->add_option("--p", cfg.p, "Prime modulus")->required();
    c_sim->add_option("--ks", cfg.ks, "Explicit sequence k_1,..,k_d")->delimiter(',');
    c_sim->add_option("--g", cfg.g, "Generator for a cyclic sequence (with --d)");
    c_sim->add_option("--d", cfg.d_override, "Cyclic sequence length");
    c_sim->add_option("--j", cfg.j, "Word length")->required();
    c_sim->add_flag("--fast-power-oracle", cfg.fast_power_oracle,
                    "Evaluate letter powers by direct angle evaluation instead of iterated "
                    "matrix products");
    c_sim->add_flag("--allow-any-g", cfg.allow_any_g, "Skip the primitive-root check");

    auto* c_t1 = app.add_subcommand("table1", "Random vs cyclic epsilon for (p, g) pairs");
    c_t1->add_option("--eps", cfg.eps, "Target error bound (default 0.1)");
    c_t1->add_option("--p-list", cfg.p_list, "Primes (parallel to --g-list)")->delimiter(',');
    c_t1->add_option("--g-list", cfg.g_list, "Generators (parallel to --p-list)")->delimiter(',');
    c_t1->add_option("--trials", cfg.trials, "Random sequences per row (default 5000)");
    c_t1->add_flag("--exclude-zero-k", cfg.exclude_zero_k, "Draw random k from {1..p-1}");

    auto* c_t2 = app.add_subcommand("table2", "Epsilon for several generators at one prime");
    c_t2->add_option("--p", cfg.p, "Prime modulus (default 9059)");
    c_t2->add_option("--eps", cfg.eps, "Target error bound (default 0.1)");
    c_t2->add_option("--g-list", cfg.g_list, "Generators to evaluate")->delimiter(',');

    auto* c_mg = app.add_subcommand("mingen", "Exhaustive minimal-generator search");
    c_mg->add_option("--p", cfg.p, "Prime modulus")->required();
    c_mg->add_option("--eps", cfg.eps, "Target error bound (default 0.1)");

    auto* c_hy = app.add_subcommand("hypothesis", "Scan cyclic sequences for bound violations");
    c_hy->add_option("--p-min", cfg.p_min, "Lower end of the prime range (default 2)");
    c_hy->add_option("--p-max", cfg.p_max, "Upper end of the prime range")->required();
    c_hy->add_option("--eps", cfg.eps, "Epsilon fixing d = required_length(p, eps) (default 0.1)");
    c_hy->add_flag("--all-d", cfg.all_d, "Check every length d < p instead");
    c_hy->add_flag("--unrounded-threshold", cfg.unrounded_threshold,
                   "Threshold from the unrounded length formula");

    auto* c_rr =
        app.add_subcommand("random-rate", "Fraction of random sequences meeting the bound");
    c_rr->add_option("--p", cfg.p, "Prime modulus")->required();
    c_rr->add_option("--eps", cfg.eps, "Target error bound (default 0.1)");
    c_rr->add_option("--trials", cfg.trials, "Random sequences (default 5000)");
    c_rr->add_flag("--exclude-zero-k", cfg.exclude_zero_k, "Draw random k from {1..p-1}");
    c_rr->add_flag("--unrounded-threshold", cfg.unrounded_threshold,
                   "Threshold from the unrounded length formula");

    auto* c_cp = app.add_subcommand("compare", "Cyclic vs random comparison grid");
    c_cp->add_option("--p-list", cfg.p_list, "Primes")->required()->delimiter(',');
    c_cp->add_option("--eps-list", cfg.eps_list, "Epsilon values")->required()->delimiter(',');
    c_cp->add_option("--gens-per-instance", cfg.gens_per_instance,
                     "Sampled generators per (p, eps) instance (default 3)");
    c_cp->add_option("--trials", cfg.trials, "Random sequences per instance (default 50)");
    c_cp->add_flag("--exclude-zero-k", cfg.exclude_zero_k, "Draw random k from {1..p-1}");

    auto* c_az =
        app.add_subcommand("azuma", "Empirical tail of the cosine sum vs the theory bound");
    c_az->add_option("--p", cfg.p, "Prime modulus")->required();
    c_az->add_option("--eps", cfg.eps, "Epsilon fixing d (default 0.1)");
    c_az->add_option("--d", cfg.d_override, "Explicit sequence length (overrides --eps)");
    c_az->add_option("--lambdas", cfg.lambdas, "Deviation thresholds (default 20,40,51)")
        ->delimiter(',');
    c_az->add_option("--trials", cfg.trials, "Random sequences (default 10000)");
    c_az->add_option("--j", cfg.j, "Word length used for the sum (default 1)");
    c_az->add_flag("--exclude-zero-k", cfg.exclude_zero_k, "Draw random k from {1..p-1}");

    auto* c_ai = app.add_subcommand(
        "aikps", "Inverse-residue set construction and its exponential sums");
    c_ai->add_option("--p", cfg.p, "Prime modulus")->required();
    c_ai->add_option("--eps-a", cfg.eps_a, "Construction parameter (default 1.0)");

    for (auto* cmd : {c_eps, c_sim, c_t1, c_t2, c_mg, c_hy, c_rr, c_cp, c_az, c_ai})
        add_common_options(cmd, cfg);

    c_t2->parse_complete_callback([&cfg] {
        if (cfg.p == 0) cfg.p = 9059;
        if (cfg.g_list.empty())
            cfg.g_list.assign(std::begin(k_table2_default_gens), std::end(k_table2_default_gens));
    });
    c_t1->parse_complete_callback([&cfg] {
        if (cfg.p_list.empty() != cfg.g_list.empty())
            throw CLI::ValidationError("table1", "--p-list and --g-list must be given together");
        if (cfg.p_list.empty()) {
            for (const auto& [p, g] : k_table1_defaults) {
                cfg.p_list.push_back(p);
                cfg.g_list.push_back(g);
            }
        }
        if (cfg.p_list.size() != cfg.g_list.size())
            throw CLI::ValidationError("table1", "--p-list and --g-list lengths differ");
    });
    c_sim->parse_complete_callback([&cfg] {
        const bool explicit_ks = !cfg.ks.empty();
        const bool cyclic = cfg.g != 0;
        if (explicit_ks == cyclic)
            throw CLI::ValidationError("simulate", "give exactly one of --ks or --g with --d");
        if (cyclic && cfg.d_override <= 0)
            throw CLI::ValidationError("simulate", "--g requires --d");
    });
}

/// Fill derived fields and run the semantic checks the option syntax
/// cannot express. Throws std::invalid_argument on violations.
inline void finalize_config(const CLI::App& app, RunConfig& cfg) {
    const auto subs = app.get_subcommands();
    if (subs.empty()) throw std::invalid_argument("no command given");
    cfg.command = subs[0]->get_name();
    const auto* eps_opt = subs[0]->get_option_no_throw("--eps");
    cfg.eps_given = eps_opt != nullptr && eps_opt->count() > 0;

    if (cfg.trials == 0) {
        if (cfg.command == "table1" || cfg.command == "random-rate") cfg.trials = 5000;
        else if (cfg.command == "azuma") cfg.trials = 10000;
        else cfg.trials = 50;
    }

    const bool needs_eps_range = cfg.command == "epsilon" || cfg.command == "table1" ||
                                 cfg.command == "table2" || cfg.command == "mingen" ||
                                 cfg.command == "hypothesis" || cfg.command == "random-rate" ||
                                 cfg.command == "azuma";
    if (needs_eps_range && !(cfg.eps > 0.0 && cfg.eps < 1.0))
        throw std::invalid_argument("--eps must be in (0, 1)");
    for (double e : cfg.eps_list) {
        if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("--eps-list entries must be in (0, 1)");
    }

    auto check_prime = [](u64 p) {
        if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    };
    const bool takes_single_p = cfg.command == "epsilon" || cfg.command == "simulate" ||
                                cfg.command == "table2" || cfg.command == "mingen" ||
                                cfg.command == "random-rate" || cfg.command == "azuma" ||
                                cfg.command == "aikps";
    if (takes_single_p) check_prime(cfg.p);
    for (u64 p : cfg.p_list) check_prime(p);

    if (cfg.command == "epsilon" && !cfg.allow_any_g) {
        const auto pm = PrimeModulus::create(cfg.p);
        if (!is_primitive_root(cfg.g, pm))
            throw std::invalid_argument(std::to_string(cfg.g) + " is not a primitive root mod " +
                                        std::to_string(cfg.p));
    }
    if (cfg.command == "table1") {
        for (std::size_t i = 0; i < cfg.p_list.size(); ++i) {
            const auto pm = PrimeModulus::create(cfg.p_list[i]);
            if (!is_primitive_root(cfg.g_list[i], pm))
                throw std::invalid_argument(std::to_string(cfg.g_list[i]) +
                                            " is not a primitive root mod " +
                                            std::to_string(cfg.p_list[i]));
        }
    }
}

inline std::string quantity(double v) { return qfa::detail::format_double(v, 0); }

inline std::size_t resolved_length(const PrimeModulus& pm, RunConfig& cfg) {
    if (cfg.d_override > 0) {
        if (cfg.eps_given)
            cfg.warnings.push_back("--d overrides the length derived from --eps");
        return static_cast<std::size_t>(cfg.d_override);
    }
    return required_length(pm, cfg.eps);
}

inline void echo(Report& rep, std::string key, std::string value) {
    rep.parameters.emplace_back(std::move(key), std::move(value));
}

} // namespace detail

/// Parse (and semantically validate) an argument vector; the program name
/// is not included. Throws CLI::ParseError for usage problems and
/// std::invalid_argument for semantic ones (non-prime p, bad generator, ...).
inline RunConfig parse_args(std::vector<std::string> args) {
    RunConfig cfg;
    CLI::App app{detail::k_app_description};
    detail::build_app(app, cfg);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    detail::finalize_config(app, cfg);
    return cfg;
}

/// Run the configured command and build its report. Throws on runtime
/// failures; the counterexample exit signal is derived from the report
/// by the caller.
inline Report execute(RunConfig cfg) {
    using namespace std::chrono;
    const auto t0 = steady_clock::now();

    Report rep;
    rep.command = cfg.command;
    rep.master_seed = cfg.master_seed;
    const ExpOptions opts{cfg.threads, cfg.exclude_zero_k, cfg.unrounded_threshold};

    if (cfg.command == "epsilon") {
        const auto pm = PrimeModulus::create(cfg.p);
        const std::size_t d = detail::resolved_length(pm, cfg);
        const double eps_shown =
            cfg.d_override > 0 && !cfg.eps_given
                ? 2.0 * std::log(2.0 * static_cast<double>(pm.p)) / static_cast<double>(d)
                : cfg.eps;
        const auto prof = worst_case_epsilon(cyclic_sequence(cfg.g, pm, d, cfg.allow_any_g));
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "g", std::to_string(cfg.g));
        detail::echo(rep, "d", std::to_string(d));
        rep.header = {"p", "eps", "d", "g", "eps_g", "worst_j", "max_abs_cos_sum"};
        rep.rows.push_back({cfg.p, eps_shown, static_cast<u64>(d), cfg.g, prof.worst_eps,
                            static_cast<u64>(prof.worst_j), prof.max_abs_cosine_sum});
    } else if (cfg.command == "simulate") {
        const auto pm = PrimeModulus::create(cfg.p);
        ParameterSequence seq;
        if (!cfg.ks.empty()) {
            seq.p = pm.p;
            seq.ks.reserve(cfg.ks.size());
            for (u64 k : cfg.ks) {
                if (k >= pm.p) throw std::invalid_argument("--ks entries must be in [0, p)");
                seq.ks.push_back(static_cast<u32>(k));
            }
        } else {
            seq = cyclic_sequence(cfg.g, pm, static_cast<std::size_t>(cfg.d_override),
                                  cfg.allow_any_g);
        }
        const double closed = accept_prob(seq, cfg.j);
        const double oracle = run(build_qfa(seq), cfg.j, cfg.fast_power_oracle);
        std::string ks_str;
        for (std::size_t i = 0; i < seq.ks.size(); ++i) {
            if (i) ks_str += ' ';
            ks_str += std::to_string(seq.ks[i]);
        }
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "j", std::to_string(cfg.j));
        detail::echo(rep, "ks", ks_str);
        rep.header = {"p", "d", "j", "closed_form", "oracle", "abs_diff"};
        rep.rows.push_back({cfg.p, static_cast<u64>(seq.ks.size()), cfg.j, closed, oracle,
                            std::fabs(closed - oracle)});
    } else if (cfg.command == "table1") {
        detail::echo(rep, "eps", detail::quantity(cfg.eps));
        detail::echo(rep, "trials", std::to_string(cfg.trials));
        rep.header = {"p", "eps", "d", "g", "eps_rand", "eps_g"};
        for (std::size_t i = 0; i < cfg.p_list.size(); ++i) {
            const auto pm = PrimeModulus::create(cfg.p_list[i]);
            const auto row =
                table1_row(pm, cfg.eps, cfg.g_list[i], cfg.trials, cfg.master_seed, opts);
            rep.rows.push_back(
                {row.p, row.eps, static_cast<u64>(row.d), row.g, row.eps_rand, row.eps_g});
        }
    } else if (cfg.command == "table2") {
        const auto pm = PrimeModulus::create(cfg.p);
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "eps", detail::quantity(cfg.eps));
        const auto rows = table2_scan(pm, cfg.eps, cfg.g_list, opts);
        const u64 d = static_cast<u64>(required_length(pm, cfg.eps));
        rep.header = {"p", "eps", "d", "g", "eps_g"};
        for (const auto& r : rows) rep.rows.push_back({cfg.p, cfg.eps, d, r.g, r.eps_g});
    } else if (cfg.command == "mingen") {
        const auto pm = PrimeModulus::create(cfg.p);
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "eps", detail::quantity(cfg.eps));
        const auto res = minimal_generator(pm, cfg.eps, opts);
        rep.summary.emplace_back("roots_scanned", std::to_string(res.roots_scanned));
        rep.header = {"p", "eps", "d", "g_min", "eps_g_min"};
        rep.rows.push_back({cfg.p, cfg.eps, static_cast<u64>(res.d), res.g_min, res.eps_min});
    } else if (cfg.command == "hypothesis") {
        detail::echo(rep, "p_min", std::to_string(cfg.p_min));
        detail::echo(rep, "p_max", std::to_string(cfg.p_max));
        detail::echo(rep, "policy", cfg.all_d ? "all-d" : "from-eps");
        if (!cfg.all_d) detail::echo(rep, "eps", detail::quantity(cfg.eps));
        const auto res = hypothesis_scan(cfg.p_min, cfg.p_max,
                                         cfg.all_d ? DPolicy::all_below_p : DPolicy::from_eps,
                                         cfg.eps, opts);
        rep.summary.emplace_back("primes_checked", std::to_string(res.primes_checked));
        rep.summary.emplace_back("combos_checked", std::to_string(res.combos_checked));
        rep.summary.emplace_back("primes_skipped", std::to_string(res.skipped_primes.size()));
        rep.summary.emplace_back("counterexamples", std::to_string(res.counterexamples.size()));
        rep.header = {"p", "g", "d", "j", "cos_sum", "threshold"};
        for (const auto& cx : res.counterexamples)
            rep.rows.push_back(
                {cx.p, cx.g, static_cast<u64>(cx.d), cx.j, cx.cos_sum, cx.threshold});
    } else if (cfg.command == "random-rate") {
        const auto pm = PrimeModulus::create(cfg.p);
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "eps", detail::quantity(cfg.eps));
        detail::echo(rep, "trials", std::to_string(cfg.trials));
        const auto res = random_success_rate(pm, cfg.eps, cfg.trials, cfg.master_seed, opts);
        rep.header = {"p",      "eps",       "d",            "trials",
                      "successes", "success_rate", "ci_half_width", "union_bound"};
        rep.rows.push_back({res.p, res.eps, static_cast<u64>(res.d), static_cast<u64>(res.trials),
                            static_cast<u64>(res.successes), res.fraction, res.ci_half_width,
                            res.union_bound});
    } else if (cfg.command == "compare") {
        detail::echo(rep, "gens_per_instance", std::to_string(cfg.gens_per_instance));
        detail::echo(rep, "trials", std::to_string(cfg.trials));
        const auto res = random_vs_cyclic(cfg.p_list, cfg.eps_list, cfg.gens_per_instance,
                                          cfg.trials, cfg.master_seed, opts);
        rep.summary.emplace_back("win_fraction", detail::quantity(res.win_fraction));
        rep.summary.emplace_back("ci_half_width", detail::quantity(res.ci_half_width));
        rep.header = {"p", "eps", "g", "d", "eps_g", "eps_rand", "cyclic_wins"};
        for (const auto& r : res.rows)
            rep.rows.push_back(
                {r.p, r.eps, r.g, static_cast<u64>(r.d), r.eps_g, r.eps_rand, r.cyclic_wins});
    } else if (cfg.command == "azuma") {
        const auto pm = PrimeModulus::create(cfg.p);
        const std::size_t d = detail::resolved_length(pm, cfg);
        const u64 j = cfg.j == 0 ? 1 : cfg.j;
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "d", std::to_string(d));
        detail::echo(rep, "j", std::to_string(j));
        detail::echo(rep, "trials", std::to_string(cfg.trials));
        const auto res =
            azuma_tail_check(pm, d, cfg.lambdas, cfg.trials, cfg.master_seed, j, opts);
        rep.summary.emplace_back("mean_cos", detail::quantity(res.mean_cos));
        rep.summary.emplace_back("mean_cos_3sigma", detail::quantity(res.mean_cos_3sigma));
        rep.header = {"lambda", "empirical_tail", "bound", "bound_plus_3sigma", "ok"};
        for (const auto& r : res.rows)
            rep.rows.push_back({r.lambda, r.empirical, r.bound, r.bound_plus_3sigma, r.ok});
    } else if (cfg.command == "aikps") {
        const auto pm = PrimeModulus::create(cfg.p);
        detail::echo(rep, "p", std::to_string(cfg.p));
        detail::echo(rep, "eps_a", detail::quantity(cfg.eps_a));
        const auto [sets, seq] = aikps_sequence(pm, cfg.eps_a);
        const auto t4 = exp_sum_report(sets, pm, cfg.threads);
        rep.header = {"p",     "eps_a",  "window_lo",       "window_hi", "num_primes_r",
                      "s_max", "t_size", "max_abs_exp_sum", "argmax_k",  "ratio",
                      "log_bound"};
        rep.rows.push_back({cfg.p, cfg.eps_a, sets.window_hi / 2.0, sets.window_hi,
                            static_cast<u64>(sets.primes_r.size()), sets.s_max,
                            static_cast<u64>(sets.set_t.size()), t4.max_abs_sum,
                            static_cast<u64>(t4.argmax_k), t4.ratio, t4.bound});
    } else {
        throw std::logic_error("execute: unknown command " + cfg.command);
    }

    rep.warnings = cfg.warnings;
    if (cfg.timing)
        rep.elapsed_ms = duration_cast<milliseconds>(steady_clock::now() - t0).count();
    return rep;
}

inline std::string serialize(const Report& rep, const RunConfig& cfg) {
    return cfg.format == "json" ? to_json(rep, cfg.precision) : to_csv(rep, cfg.precision);
}

/// A hypothesis scan that found counterexamples signals exit code 2;
/// everything else that reaches serialization is a success.
inline int exit_code_for(const RunConfig& cfg, const Report& rep) {
    return cfg.command == "hypothesis" && !rep.rows.empty() ? 2 : 0;
}

/// Full driver: parse, execute, serialize, write. Returns the process
/// exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{detail::k_app_description};
    detail::build_app(app, cfg);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
        detail::finalize_config(app, cfg);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    Report rep;
    try {
        rep = execute(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string text = serialize(rep, cfg);
    if (cfg.output == "-") {
        out << text;
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.output << " for writing\n";
            return 1;
        }
        file << text;
        if (!file) {
            err << "error: failed while writing " << cfg.output << "\n";
            return 1;
        }
    }
    return exit_code_for(cfg, rep);
}

} // namespace qfa::cli
