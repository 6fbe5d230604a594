// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit if
// anything fails. Each check pins its tolerance in code; stochastic
// checks run at fixed seeds so reruns are reproducible.

#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "qfa/acceptance.hpp"
#include "qfa/cli.hpp"
#include "qfa/experiments.hpp"
#include "qfa/numtheory.hpp"
#include "qfa/sequences.hpp"
#include "qfa/simulator.hpp"

using namespace qfa;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

unsigned worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : hw;
}

struct TableRow {
    u64 p;
    u64 g;
    double eps_g;       // published cyclic value
    u64 g_min;
    double eps_g_min;   // published minimal value
};

// Published reference rows: p, g, eps_g, g_min, eps_{g_min} at eps = 0.1.
const TableRow k_rows[] = {
    {1523, 948, 0.01517, 624, 0.00919},  {2689, 656, 0.01950, 1088, 0.01060},
    {3671, 2134, 0.02122, 1243, 0.01121}, {4093, 772, 0.01803, 1063, 0.01154},
    {5861, 2190, 0.01825, 5732, 0.01133}, {6247, 406, 0.02006, 97, 0.01182},
    {7481, 6978, 0.01691, 2865, 0.01205}, {8581, 5567, 0.02057, 4362, 0.01335},
    {9883, 1260, 0.01905, 5675, 0.01319},
};
const std::size_t k_lengths[] = {161, 172, 179, 181, 188, 189, 193, 196, 198};

void criterion_1_table1_cyclic() {
    bool ok = true;
    std::string detail;
    for (const auto& row : k_rows) {
        const auto pm = PrimeModulus::create(row.p);
        const std::size_t d = required_length(pm, 0.1);
        const double eps_g = worst_case_epsilon(cyclic_sequence(row.g, pm, d)).worst_eps;
        if (std::fabs(eps_g - row.eps_g) > 1e-4) {
            ok = false;
            detail += "p=" + std::to_string(row.p) + " got " + std::to_string(eps_g) + "; ";
        }
    }
    report(1, "table of cyclic eps_g values, nine rows within 1e-4", ok, detail);
}

void criterion_2_lengths() {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < std::size(k_rows); ++i) {
        const auto d = required_length(PrimeModulus::create(k_rows[i].p), 0.1);
        if (d != k_lengths[i]) {
            ok = false;
            detail += "p=" + std::to_string(k_rows[i].p) + " got d=" + std::to_string(d) + "; ";
        }
    }
    report(2, "sequence lengths d = ceil(2 ln(2p)/0.1) match all nine rows", ok, detail);
}

void criterion_3_table2() {
    const std::pair<u64, double> published[] = {
        {102, 0.02533},  {103, 0.03758},  {105, 0.01999},  {106, 0.02852},  {110, 0.01685},
        {1545, 0.01858}, {1546, 0.02235}, {1549, 0.02896}, {1552, 0.02873}, {1553, 0.02624},
        {9023, 0.01807}, {9033, 0.01413}, {9034, 0.01485}, {9036, 0.02509}, {9039, 0.02311},
    };
    const auto pm = PrimeModulus::create(9059);
    std::vector<u64> gens;
    for (const auto& [g, v] : published) gens.push_back(g);
    const auto rows = table2_scan(pm, 0.1, gens, {.threads = worker_threads()});

    bool ok = required_length(pm, 0.1) == 197;
    std::string detail = ok ? "" : "d != 197; ";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::fabs(rows[i].eps_g - published[i].second) > 1e-4) {
            ok = false;
            detail += "g=" + std::to_string(rows[i].g) + " got " + std::to_string(rows[i].eps_g) + "; ";
        }
    }
    report(3, "fifteen generator eps_g values at p=9059 within 1e-4", ok, detail);
}

void criterion_4_mingen() {
    // The minimum is attained on an equivalence class {g, p-g, g^-1,
    // p-g^-1} whose members tie exactly; the published pick need not be
    // the class member the argmin lands on, so the check is: the found
    // minimum matches the published epsilon within 1e-4, and the
    // published generator attains that same minimum.
    bool ok = true;
    std::string detail;
    for (const auto& row : k_rows) {
        if (row.p != 1523 && row.p != 2689 && row.p != 4093) continue;
        const auto pm = PrimeModulus::create(row.p);
        const auto res = minimal_generator(pm, 0.1, {.threads = worker_threads()});
        const double eps_published_g =
            worst_case_epsilon(cyclic_sequence(row.g_min, pm, res.d)).worst_eps;
        const bool eps_match = std::fabs(res.eps_min - row.eps_g_min) <= 1e-4;
        const bool published_is_minimal = std::fabs(eps_published_g - res.eps_min) <= 1e-9;
        if (!eps_match || !published_is_minimal) ok = false;
        detail += "p=" + std::to_string(row.p) + ": g_min=" + std::to_string(res.g_min) +
                  " eps=" + std::to_string(res.eps_min) +
                  (published_is_minimal ? " (published g ties)" : " (published g DOES NOT tie)") +
                  "; ";
    }
    report(4, "exhaustive minimal-generator search matches published minima within 1e-4", ok,
           detail);
}

void criterion_5_table1_random() {
    bool ok = true;
    std::string detail;
    const std::pair<u64, double> targets[] = {{1523, 0.03635}, {9883, 0.04011}};
    for (const auto& [p, want] : targets) {
        const auto pm = PrimeModulus::create(p);
        u64 g = 0;
        for (const auto& row : k_rows)
            if (row.p == p) g = row.g;
        const auto row = table1_row(pm, 0.1, g, 5000, cli::k_default_master_seed,
                                    {.threads = worker_threads()});
        const double diff = std::fabs(row.eps_rand - want);
        if (diff > 0.002) ok = false;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "p=%llu eps_rand=%.5f published=%.5f diff=%.5f; ",
                      static_cast<unsigned long long>(p), row.eps_rand, want, diff);
        detail += buf;
    }
    report(5, "mean random eps over 5000 seeded trials within 0.002 of published", ok, detail);
}

void criterion_6_oracle_equivalence() {
    bool ok = true;
    std::string detail;
    double worst = 0.0, worst_completion = 0.0;
    for (u64 p : primes_in_range(2, 31)) {
        const auto pm = PrimeModulus::create(p);
        std::vector<ParameterSequence> seqs;
        for (u64 t = 0; t < 18; ++t)
            seqs.push_back(random_sequence(pm, 1 + t % 12, 2027, t));
        if (p > 2) {
            const auto roots = primitive_roots(pm);
            seqs.push_back(cyclic_sequence(roots.front(), pm, std::min<std::size_t>(p - 1, 9)));
            seqs.push_back(cyclic_sequence(roots.back(), pm, std::min<std::size_t>(p - 1, 5)));
        } else {
            seqs.push_back(cyclic_sequence(1, pm, 1));
            ParameterSequence one;
            one.p = 2;
            one.ks = {1, 1, 1};
            seqs.push_back(one);
        }
        ParameterSequence zeros;
        zeros.p = p;
        zeros.ks.assign(5, 0);
        seqs.push_back(zeros);

        for (const auto& seq : seqs) {
            const auto m = build_qfa(seq);
            for (u64 j = 0; j <= 2 * p; ++j)
                worst = std::max(worst, std::fabs(run(m, j) - accept_prob(seq, j)));
        }
        // two distinct completions agree
        const auto& probe = seqs[3];
        const auto mh = build_qfa(probe, CompletionMethod::householder);
        const auto mg = build_qfa(probe, CompletionMethod::gram_schmidt);
        for (u64 j = 0; j <= 2 * p; ++j)
            worst_completion = std::max(worst_completion, std::fabs(run(mh, j) - run(mg, j)));
    }
    if (worst >= 1e-9 || worst_completion >= 1e-10) ok = false;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |oracle - closed form| = %.2e, completion gap = %.2e",
                  worst, worst_completion);
    report(6, "state-vector oracle equals the closed form (p <= 31, j <= 2p, 21 sequences/p)",
           ok, buf);
}

void criterion_7_unitarity() {
    double worst_unitary = 0.0, worst_collect = 0.0, worst_period = 0.0;
    for (u64 p : primes_in_range(2, 101)) {
        const auto pm = PrimeModulus::create(p);
        const auto seq = random_sequence(pm, 4, 7, p);
        const auto m = build_qfa(seq);
        worst_unitary = std::max({worst_unitary, unitarity_error(m.v_left),
                                  unitarity_error(m.v_letter), unitarity_error(m.v_right)});

        // V_$ maps the uniform superposition to the accept state
        StateVector psi0(2 * m.d, Complex{});
        const double amp = 1.0 / std::sqrt(static_cast<double>(m.d));
        for (std::size_t i = 0; i < m.d; ++i) psi0[2 * i] = amp;
        const auto collected = apply_matrix(m.v_right, psi0);
        for (std::size_t i = 0; i < collected.size(); ++i) {
            const Complex expect = i == m.accept_index ? Complex{1.0, 0.0} : Complex{};
            worst_collect = std::max(worst_collect, std::abs(collected[i] - expect));
        }

        // letter matrix has period p
        UnitaryMatrix power = UnitaryMatrix::identity(2 * m.d);
        for (u64 t = 0; t < p; ++t) power = multiply(m.v_letter, power);
        for (std::size_t r = 0; r < power.dim; ++r)
            for (std::size_t c = 0; c < power.dim; ++c) {
                const Complex expect = r == c ? Complex{1.0, 0.0} : Complex{};
                worst_period = std::max(worst_period, std::abs(power.at(r, c) - expect));
            }
    }
    // larger machines at the published scale
    {
        const auto pm = PrimeModulus::create(1523);
        const auto m = build_qfa(cyclic_sequence(948, pm, 161));
        worst_unitary = std::max({worst_unitary, unitarity_error(m.v_left),
                                  unitarity_error(m.v_letter), unitarity_error(m.v_right)});
    }
    const bool ok = worst_unitary < 1e-12 && worst_collect < 1e-12 && worst_period < 1e-8;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "max unitarity err = %.2e, endmarker err = %.2e, period err = %.2e",
                  worst_unitary, worst_collect, worst_period);
    report(7, "unitarity, endmarker collection and letter periodicity", ok, buf);
}

void criterion_8_hypothesis() {
    const auto small = hypothesis_scan(2, 101, DPolicy::all_below_p, 0.1,
                                       {.threads = worker_threads()});
    const bool small_ok = small.counterexamples.empty() && small.primes_checked == 26;

    const auto big = hypothesis_scan(2, 9973, DPolicy::from_eps, 0.1,
                                     {.threads = worker_threads()});
    const bool big_ok = big.counterexamples.empty() && big.primes_checked >= 1200;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "all d < p for p<=101: %llu combos, %zu counterexamples; d=required_length "
                  "to p<=9973: %llu primes (%zu below the d<p domain skipped), %zu counterexamples",
                  static_cast<unsigned long long>(small.combos_checked),
                  small.counterexamples.size(),
                  static_cast<unsigned long long>(big.primes_checked),
                  big.skipped_primes.size(), big.counterexamples.size());
    report(8, "hypothesis sweep finds no bound violations", small_ok && big_ok, buf);
}

void criterion_9_tails() {
    const auto pm = PrimeModulus::create(1523);
    const auto rate = random_success_rate(pm, 0.1, 5000, cli::k_default_master_seed,
                                          {.threads = worker_threads()});
    const bool rate_ok = rate.fraction >= 0.999;

    const std::vector<double> lambdas{20.0, 40.0, 51.0};
    const auto tail = azuma_tail_check(pm, 161, lambdas, 10000, cli::k_default_master_seed, 1,
                                       {.threads = worker_threads()});
    bool tail_ok = true;
    std::string tail_detail;
    for (const auto& row : tail.rows) {
        if (!row.ok) tail_ok = false;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "lambda=%g: %.2e <= %.2e; ", row.lambda, row.empirical,
                      row.bound_plus_3sigma);
        tail_detail += buf;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "success rate %.5f; ", rate.fraction);
    report(9, "random-sequence success rate and empirical tail bound", rate_ok && tail_ok,
           buf + tail_detail);
}

void criterion_10_aikps() {
    bool ok = true;
    std::string detail;
    for (u64 p : {1523ull, 9973ull}) {
        const auto pm = PrimeModulus::create(p);
        const auto [sets, seq] = aikps_sequence(pm, 1.0);

        // construction invariants
        const double hi = sets.window_hi, lo = hi / 2.0;
        for (u64 r : sets.primes_r)
            if (!is_prime(r) || !(static_cast<double>(r) > lo) ||
                !(static_cast<double>(r) <= hi))
                ok = false;
        for (std::size_t i = 1; i < sets.set_t.size(); ++i)
            if (sets.set_t[i] <= sets.set_t[i - 1]) ok = false;
        if (!sets.set_t.empty() && sets.set_t.back() >= p) ok = false;

        // real part of the complex pipeline matches the cosine path
        const auto t4 = exp_sum_report(sets, pm, worker_threads());
        for (u64 k : {u64{1}, p / 3, u64{t4.argmax_k}}) {
            if (k == 0) continue;
            double re = 0.0;
            for (u32 t : sets.set_t) re += cos_term(mul_mod(t, k, p), p);
            if (std::fabs(re - cosine_sum(seq, k)) >= 1e-9) ok = false;
            double im = 0.0;
            for (u32 t : sets.set_t) im += sin_term(mul_mod(t, k, p), p);
            if (std::fabs(cosine_sum(seq, k)) > std::hypot(re, im) + 1e-9) ok = false;
        }

        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "p=%llu |T|=%zu max|sum|/|T| = %.4f vs (ln p)^-1 = %.4f (report only); ",
                      static_cast<unsigned long long>(p), sets.set_t.size(), t4.ratio,
                      t4.bound / static_cast<double>(sets.set_t.size()));
        detail += buf;
    }
    report(10, "inverse-residue construction invariants and exponential-sum report", ok, detail);
}

void criterion_11_determinism() {
    using qfa::cli::parse_args;
    const std::vector<std::vector<std::string>> commands = {
        {"table1", "--p-list", "1523", "--g-list", "948", "--trials", "200"},
        {"hypothesis", "--p-max", "499"},
        {"random-rate", "--p", "101", "--eps", "0.3", "--trials", "500"},
        {"azuma", "--p", "101", "--d", "30", "--lambdas", "5,10", "--trials", "1000"},
        {"compare", "--p-list", "101,211", "--eps-list", "0.3", "--trials", "10"},
        {"mingen", "--p", "331", "--eps", "0.3"},
        {"aikps", "--p", "1523", "--eps-a", "1"},
        {"simulate", "--p", "5", "--ks", "1,2", "--j", "1"},
    };
    bool ok = true;
    std::string detail;
    for (auto base : commands) {
        const std::string name = base[0];
        for (const char* fmt : {"csv", "json"}) {
            auto serialized = [&](const char* threads) {
                auto args = base;
                args.insert(args.end(), {"--threads", threads, "--format", fmt});
                auto cfg = parse_args(args);
                return cli::serialize(cli::execute(cfg), cfg);
            };
            const std::string once = serialized("1");
            const std::string again = serialized("1");
            const std::string wide = serialized("8");
            if (once != again || once != wide) {
                ok = false;
                detail += name + "/" + fmt + " differs; ";
            }
        }
    }
    report(11, "reports are byte-identical across reruns and thread counts", ok, detail);
}

} // namespace

int main() {
    criterion_1_table1_cyclic();
    criterion_2_lengths();
    criterion_3_table2();
    criterion_4_mingen();
    criterion_5_table1_random();
    criterion_6_oracle_equivalence();
    criterion_7_unitarity();
    criterion_8_hypothesis();
    criterion_9_tails();
    criterion_10_aikps();
    criterion_11_determinism();

    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
