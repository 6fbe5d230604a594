#pragma once

// Experiment drivers: reproduction of the generator tables, the cyclic
// sequence hypothesis sweep, random-sequence success rates, the
// random-vs-cyclic comparison and the tail-bound check.
//
// Determinism contract: every driver produces results that depend only
// on its inputs and master_seed, not on the thread count. Parallel work
// writes into per-index slots and is reduced in index order; per-trial
// randomness is keyed by (master_seed, p, trial).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "qfa/acceptance.hpp"
#include "qfa/numtheory.hpp"
#include "qfa/parallel.hpp"
#include "qfa/rng.hpp"
#include "qfa/sequences.hpp"

namespace qfa {

struct ExpOptions {
    unsigned threads = 1;
    bool exclude_zero_k = false;      // draw random k from {1..p-1} instead of {0..p-1}
    bool unrounded_threshold = false; // bound checks use the unrounded length formula
};

// ---------------------------------------------------------------------------
// Table rows
// ---------------------------------------------------------------------------

struct Table1Row {
    u64 p = 0;
    double eps = 0.0;
    std::size_t d = 0;
    u64 g = 0;
    double eps_rand = 0.0;  // mean worst-case epsilon over random sequences
    double eps_g = 0.0;     // worst-case epsilon of the cyclic sequence
};

/// One row of the random-vs-cyclic table: eps_g for the given generator
/// and the average worst-case epsilon over `trials` random sequences.
inline Table1Row table1_row(const PrimeModulus& pm, double eps, u64 g, std::size_t trials,
                            u64 master_seed, const ExpOptions& opts = {}) {
    if (trials < 1) throw std::invalid_argument("table1_row: need trials >= 1");
    Table1Row row;
    row.p = pm.p;
    row.eps = eps;
    row.d = required_length(pm, eps);
    row.g = g;
    row.eps_g = worst_case_epsilon(cyclic_sequence(g, pm, row.d)).worst_eps;

    std::vector<double> vals(trials);
    parallel_for_index(trials, opts.threads, [&](std::size_t t) {
        const auto seq = random_sequence(pm, row.d, master_seed, t, opts.exclude_zero_k);
        vals[t] = worst_case_epsilon(seq).worst_eps;
    });
    row.eps_rand = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(trials);
    return row;
}

struct GeneratorEpsilon {
    u64 g = 0;
    double eps_g = 0.0;
};

/// eps_g for each listed generator at the length fixed by (p, eps).
inline std::vector<GeneratorEpsilon> table2_scan(const PrimeModulus& pm, double eps,
                                                 std::span<const u64> generators,
                                                 const ExpOptions& opts = {}) {
    const std::size_t d = required_length(pm, eps);
    for (u64 g : generators) {
        if (!is_primitive_root(g, pm))
            throw std::invalid_argument("table2_scan: " + std::to_string(g) +
                                        " is not a primitive root mod " + std::to_string(pm.p));
    }
    std::vector<GeneratorEpsilon> rows(generators.size());
    parallel_for_index(generators.size(), opts.threads, [&](std::size_t i) {
        rows[i] = {generators[i],
                   worst_case_epsilon(cyclic_sequence(generators[i], pm, d)).worst_eps};
    });
    return rows;
}

struct MinGenResult {
    u64 g_min = 0;
    double eps_min = 0.0;
    std::size_t d = 0;
    std::size_t roots_scanned = 0;
};

/// Exhaustive scan over all phi(p-1) primitive roots; the smallest g among
/// bitwise-equal minima wins. Mirror pairs (g, p-g) evaluate to exactly
/// the same epsilon here, so those ties resolve to the smaller generator;
/// inverse pairs (g, g^-1) are mathematically tied but accumulate in a
/// different order, so which one lands lower is floating-point luck.
inline MinGenResult minimal_generator(const PrimeModulus& pm, double eps,
                                      const ExpOptions& opts = {}) {
    if (pm.p < 3) throw std::invalid_argument("minimal_generator: need p >= 3");
    const std::vector<u64> roots = primitive_roots(pm);
    const std::size_t d = required_length(pm, eps);
    std::vector<double> vals(roots.size());
    parallel_for_index(roots.size(), opts.threads, [&](std::size_t i) {
        vals[i] = worst_case_epsilon(cyclic_sequence(roots[i], pm, d)).worst_eps;
    });
    MinGenResult res;
    res.d = d;
    res.roots_scanned = roots.size();
    res.g_min = roots[0];
    res.eps_min = vals[0];
    for (std::size_t i = 1; i < roots.size(); ++i) {
        if (vals[i] < res.eps_min) {
            res.eps_min = vals[i];
            res.g_min = roots[i];
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Hypothesis sweep
// ---------------------------------------------------------------------------

enum class DPolicy {
    from_eps,     // the single length d = required_length(p, eps)
    all_below_p,  // every length d in 1..p-1
};

struct Counterexample {
    u64 p = 0;
    u64 g = 0;
    std::size_t d = 0;
    u64 j = 0;
    double cos_sum = 0.0;     // the violating sum, re-verified directly
    double threshold = 0.0;   // sqrt(2 d ln 2p)
};

struct HypothesisReport {
    u64 p_lo = 0, p_hi = 0;
    DPolicy policy = DPolicy::from_eps;
    double eps = 0.0;
    std::vector<Counterexample> counterexamples;
    u64 primes_checked = 0;
    u64 combos_checked = 0;            // (generator, d) pairs
    std::vector<u64> skipped_primes;   // from_eps only: primes with d >= p
};

namespace detail {

// Sliding-window check of one (p, g, d) triple against the threshold.
//
// For j = g^m, the sum f(j) = sum_{i=1..d} cos(2 pi g^{i+m} / p) is the
// circular window of length d starting at position m in the sequence
// s[t] = cos(2 pi g^{t+1} / p). Scanning all windows covers every
// j in 1..p-1 in O(p) instead of O(p d). Windows within `margin` of the
// threshold are re-verified by a direct summation before being reported.
struct WindowScanner {
    static constexpr double margin = 1e-6;

    const PrimeModulus& pm;
    const std::vector<double>& s;   // s[t], length n = p-1 (or 1 for p = 2)
    u64 g;

    void scan(std::size_t d, double threshold, std::vector<Counterexample>& out) const {
        const u64 n = static_cast<u64>(s.size());
        double window = 0.0;
        for (std::size_t t = 0; t < d; ++t) window += s[t % n];
        for (u64 m = 0; m < n; ++m) {
            if (std::fabs(window) >= threshold - margin) verify(m, d, threshold, out);
            window -= s[m];
            window += s[(m + d) % n];
        }
    }

private:
    void verify(u64 m, std::size_t d, double threshold, std::vector<Counterexample>& out) const {
        const u64 j = mod_pow(g, m, pm.p);
        const auto seq = cyclic_sequence(g, pm, d);
        const double exact = cosine_sum(seq, j);
        if (std::fabs(exact) >= threshold) {
            out.push_back({pm.p, g, d, j, exact, threshold});
        }
    }
};

struct PrimeScanResult {
    std::vector<Counterexample> cx;
    u64 combos = 0;
    bool skipped = false;
};

inline PrimeScanResult hypothesis_scan_one_prime(u64 p, DPolicy policy, double eps,
                                                 bool unrounded_threshold) {
    PrimeScanResult res;
    const PrimeModulus pm = PrimeModulus::create(p);
    const double ln2p = std::log(2.0 * static_cast<double>(p));

    std::size_t d_fixed = 0;
    double threshold_fixed = 0.0;
    if (policy == DPolicy::from_eps) {
        d_fixed = required_length(pm, eps);
        if (d_fixed >= p) {
            // Outside the cyclic construction's domain (d < p); the
            // hypothesis makes no claim here.
            res.skipped = true;
            return res;
        }
        // Bound at the inverted epsilon(d) = 2 ln(2p) / d, i.e.
        // sqrt(2 d ln 2p); the unrounded variant uses the real-valued
        // length 2 ln(2p) / eps instead of the integer d.
        threshold_fixed = unrounded_threshold ? std::sqrt(eps) * required_length_exact(pm, eps)
                                              : std::sqrt(2.0 * static_cast<double>(d_fixed) * ln2p);
    }

    const CosTable ct(p);
    auto run_generator = [&](const std::vector<double>& s, u64 g) {
        WindowScanner scanner{pm, s, g};
        if (policy == DPolicy::from_eps) {
            scanner.scan(d_fixed, threshold_fixed, res.cx);
            ++res.combos;
        } else {
            for (std::size_t d = 1; d < p; ++d) {
                scanner.scan(d, std::sqrt(2.0 * static_cast<double>(d) * ln2p), res.cx);
                ++res.combos;
            }
        }
    };

    if (p == 2) {
        const std::vector<double> s{ct[1]};   // the only generator is g = 1
        run_generator(s, 1);
        return res;
    }

    // Base power table for the smallest primitive root g0, then every
    // other generator g0^u (u coprime to p-1) by index decimation:
    // s_g[t] = s0[(u (t+1) - 1) mod n].
    const u64 n = p - 1;
    u64 g0 = 0;
    for (u64 g = 2; g < p; ++g) {
        if (is_primitive_root(g, pm)) {
            g0 = g;
            break;
        }
    }
    std::vector<u32> pw0(n);
    {
        u64 x = 1;
        for (u64 t = 0; t < n; ++t) {
            x = mul_mod(x, g0, p);
            pw0[t] = static_cast<u32>(x);
        }
    }
    std::vector<double> s0(n);
    for (u64 t = 0; t < n; ++t) s0[t] = ct[pw0[t]];

    std::vector<double> sg(n);
    for (u64 u = 1; u < n; ++u) {
        if (std::gcd(u, n) != 1) continue;
        const u64 g = pw0[u - 1];   // g0^u
        u64 idx = u - 1;            // (u * 1 - 1) mod n
        for (u64 t = 0; t < n; ++t) {
            sg[t] = s0[idx];
            idx += u;
            if (idx >= n) idx -= n;
        }
        run_generator(sg, g);
    }
    return res;
}

} // namespace detail

/// Check the derandomization bound for every prime in [p_lo, p_hi], every
/// primitive root and every length the policy selects. Counterexamples are
/// re-verified by direct summation and reported sorted by (p, g, d, j).
inline HypothesisReport hypothesis_scan(u64 p_lo, u64 p_hi, DPolicy policy, double eps,
                                        const ExpOptions& opts = {}) {
    if (p_hi < p_lo) throw std::invalid_argument("hypothesis_scan: empty prime range");
    HypothesisReport rep;
    rep.p_lo = p_lo;
    rep.p_hi = p_hi;
    rep.policy = policy;
    rep.eps = eps;

    const std::vector<u64> primes = primes_in_range(p_lo, p_hi);
    std::vector<detail::PrimeScanResult> results(primes.size());
    parallel_for_index(primes.size(), opts.threads, [&](std::size_t i) {
        results[i] =
            detail::hypothesis_scan_one_prime(primes[i], policy, eps, opts.unrounded_threshold);
    });

    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (results[i].skipped) {
            rep.skipped_primes.push_back(primes[i]);
            continue;
        }
        ++rep.primes_checked;
        rep.combos_checked += results[i].combos;
        rep.counterexamples.insert(rep.counterexamples.end(), results[i].cx.begin(),
                                   results[i].cx.end());
    }
    std::sort(rep.counterexamples.begin(), rep.counterexamples.end(), [](const auto& a, const auto& b) {
        return std::tie(a.p, a.g, a.d, a.j) < std::tie(b.p, b.g, b.d, b.j);
    });
    return rep;
}

// ---------------------------------------------------------------------------
// Random-sequence statistics
// ---------------------------------------------------------------------------

struct SuccessRateReport {
    u64 p = 0;
    double eps = 0.0;
    std::size_t d = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double fraction = 0.0;
    double ci_half_width = 0.0;   // 95% normal-approximation interval
    double union_bound = 0.0;     // 2 (p-1) e^(-eps d / 2), capped at 1
};

/// Fraction of random sequences meeting the bound at this (p, eps).
inline SuccessRateReport random_success_rate(const PrimeModulus& pm, double eps,
                                             std::size_t trials, u64 master_seed,
                                             const ExpOptions& opts = {}) {
    if (trials < 100) throw std::invalid_argument("random_success_rate: need trials >= 100");
    SuccessRateReport rep;
    rep.p = pm.p;
    rep.eps = eps;
    rep.d = required_length(pm, eps);
    rep.trials = trials;
    const double d_thr =
        opts.unrounded_threshold ? required_length_exact(pm, eps) : static_cast<double>(rep.d);

    std::vector<unsigned char> ok(trials);
    parallel_for_index(trials, opts.threads, [&](std::size_t t) {
        const auto seq = random_sequence(pm, rep.d, master_seed, t, opts.exclude_zero_k);
        ok[t] = meets_bound(seq, eps, d_thr) ? 1 : 0;
    });
    rep.successes = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    rep.fraction = static_cast<double>(rep.successes) / static_cast<double>(trials);
    rep.ci_half_width =
        1.959963984540054 *
        std::sqrt(rep.fraction * (1.0 - rep.fraction) / static_cast<double>(trials));
    rep.union_bound = std::min(
        1.0, 2.0 * static_cast<double>(pm.p - 1) * std::exp(-eps * static_cast<double>(rep.d) / 2.0));
    return rep;
}

// ---------------------------------------------------------------------------
// Random vs cyclic comparison
// ---------------------------------------------------------------------------

struct CompareRow {
    u64 p = 0;
    double eps = 0.0;
    u64 g = 0;
    std::size_t d = 0;
    double eps_g = 0.0;
    double eps_rand = 0.0;   // mean over trials for this (p, eps)
    bool cyclic_wins = false;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double win_fraction = 0.0;
    double ci_half_width = 0.0;
};

/// For each (p, eps) pair and a seeded sample of generators, compare the
/// cyclic eps_g against the mean random eps. Report only: the sampling
/// distribution behind the published win rate is unspecified, so no
/// threshold is attached.
inline CompareReport random_vs_cyclic(std::span<const u64> ps, std::span<const double> epss,
                                      std::size_t gens_per_instance, std::size_t trials,
                                      u64 master_seed, const ExpOptions& opts = {}) {
    if (ps.empty() || epss.empty())
        throw std::invalid_argument("random_vs_cyclic: empty sample grid");
    if (gens_per_instance < 1 || trials < 1)
        throw std::invalid_argument("random_vs_cyclic: need gens_per_instance, trials >= 1");

    struct Instance {
        u64 p;
        double eps;
    };
    std::vector<Instance> instances;
    for (u64 p : ps)
        for (double e : epss) instances.push_back({p, e});

    std::vector<std::vector<CompareRow>> per_instance(instances.size());
    parallel_for_index(instances.size(), opts.threads, [&](std::size_t idx) {
        const auto [p, eps] = instances[idx];
        const PrimeModulus pm = PrimeModulus::create(p);
        const std::size_t d = required_length(pm, eps);
        const u64 instance_seed = splitmix64_mix(master_seed ^ (idx + 1));

        double rand_sum = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto seq = random_sequence(pm, d, instance_seed, t, opts.exclude_zero_k);
            rand_sum += worst_case_epsilon(seq).worst_eps;
        }
        const double eps_rand = rand_sum / static_cast<double>(trials);

        // Seeded sample of distinct generators (partial Fisher-Yates).
        std::vector<u64> roots = primitive_roots(pm);
        Xoshiro256ss gen(derive_seed(master_seed, p, idx));
        const std::size_t take = std::min(gens_per_instance, roots.size());
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t swap_with = i + gen.uniform_below(roots.size() - i);
            std::swap(roots[i], roots[swap_with]);
        }

        for (std::size_t i = 0; i < take; ++i) {
            CompareRow row;
            row.p = p;
            row.eps = eps;
            row.g = roots[i];
            row.d = d;
            row.eps_g = worst_case_epsilon(cyclic_sequence(roots[i], pm, d)).worst_eps;
            row.eps_rand = eps_rand;
            row.cyclic_wins = row.eps_g < eps_rand;
            per_instance[idx].push_back(row);
        }
    });

    CompareReport rep;
    for (auto& rows : per_instance)
        rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
    if (!rep.rows.empty()) {
        std::size_t wins = 0;
        for (const auto& r : rep.rows) wins += r.cyclic_wins ? 1 : 0;
        rep.win_fraction = static_cast<double>(wins) / static_cast<double>(rep.rows.size());
        rep.ci_half_width = 1.959963984540054 *
                            std::sqrt(rep.win_fraction * (1.0 - rep.win_fraction) /
                                      static_cast<double>(rep.rows.size()));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Tail bound check
// ---------------------------------------------------------------------------

struct AzumaRow {
    double lambda = 0.0;
    double empirical = 0.0;      // Pr[|sum| >= lambda] over the trials
    double bound = 0.0;          // 2 e^(-lambda^2 / 2d)
    double bound_plus_3sigma = 0.0;
    bool ok = false;
};

struct AzumaReport {
    u64 p = 0;
    std::size_t d = 0;
    u64 j = 0;
    std::size_t trials = 0;
    double mean_cos = 0.0;         // empirical E[cos(2 pi k j / p)]
    double mean_cos_3sigma = 0.0;  // 3 sigma for that mean under Var <= 1/2
    std::vector<AzumaRow> rows;
};

/// Empirical tail of |sum_i cos(2 pi k_i j / p)| over random sequences
/// against the independent-bounded-variables tail 2 e^(-lambda^2 / 2d).
/// The acceptance margin is three sampling standard deviations of the
/// estimated tail at the bound.
inline AzumaReport azuma_tail_check(const PrimeModulus& pm, std::size_t d,
                                    std::span<const double> lambdas, std::size_t trials,
                                    u64 master_seed, u64 j = 1, const ExpOptions& opts = {}) {
    if (trials < 1000) throw std::invalid_argument("azuma_tail_check: need trials >= 1000");
    if (d < 1) throw std::invalid_argument("azuma_tail_check: need d >= 1");
    AzumaReport rep;
    rep.p = pm.p;
    rep.d = d;
    rep.j = j;
    rep.trials = trials;

    std::vector<double> sums(trials);
    parallel_for_index(trials, opts.threads, [&](std::size_t t) {
        const auto seq = random_sequence(pm, d, master_seed, t, opts.exclude_zero_k);
        sums[t] = cosine_sum(seq, j);
    });

    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    rep.mean_cos = total / (static_cast<double>(trials) * static_cast<double>(d));
    rep.mean_cos_3sigma =
        3.0 * std::sqrt(0.5 / (static_cast<double>(trials) * static_cast<double>(d)));

    for (double lambda : lambdas) {
        AzumaRow row;
        row.lambda = lambda;
        std::size_t hits = 0;
        for (double s : sums)
            if (std::fabs(s) >= lambda) ++hits;
        row.empirical = static_cast<double>(hits) / static_cast<double>(trials);
        row.bound = 2.0 * std::exp(-lambda * lambda / (2.0 * static_cast<double>(d)));
        const double clamped = std::min(1.0, row.bound);
        row.bound_plus_3sigma =
            row.bound + 3.0 * std::sqrt(clamped * (1.0 - clamped) / static_cast<double>(trials));
        row.ok = row.empirical <= row.bound_plus_3sigma;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace qfa
