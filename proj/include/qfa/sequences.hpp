#pragma once

// Construction of the parameter sequences k_1..k_d that drive the automaton:
// independent uniform residues, powers of a primitive root, or the
// inverse-residue set built from a short window of auxiliary primes.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfa/numtheory.hpp"
#include "qfa/parallel.hpp"
#include "qfa/rng.hpp"
#include "qfa/trig.hpp"

namespace qfa {

enum class Provenance { random, cyclic, aikps };

struct ParameterSequence {
    u64 p = 0;
    std::vector<u32> ks;
    Provenance provenance = Provenance::random;

    // provenance detail (which fields apply depends on `provenance`)
    u64 master_seed = 0;
    u64 trial_index = 0;
    u32 generator = 0;
    double eps_a = 0.0;

    std::size_t length() const { return ks.size(); }
};

/// Sequence length d = ceil(2 ln(2p) / eps). The returned d always
/// satisfies 2(p-1) e^(-eps d / 2) < 1 strictly.
inline std::size_t required_length(const PrimeModulus& pm, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("required_length: need 0 < eps < 1");
    const double exact = 2.0 * std::log(2.0 * static_cast<double>(pm.p)) / eps;
    auto d = static_cast<std::size_t>(std::ceil(exact));
    while (2.0 * static_cast<double>(pm.p - 1) * std::exp(-eps * static_cast<double>(d) / 2.0) >= 1.0)
        ++d;
    return d;
}

/// The unrounded value 2 ln(2p) / eps, for threshold variants that match
/// it before rounding.
inline double required_length_exact(const PrimeModulus& pm, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("required_length_exact: need 0 < eps < 1");
    return 2.0 * std::log(2.0 * static_cast<double>(pm.p)) / eps;
}

/// d independent uniform draws from {0,...,p-1} (or {1,...,p-1} with
/// exclude_zero), fully determined by (master_seed, trial_index).
inline ParameterSequence random_sequence(const PrimeModulus& pm, std::size_t d, u64 master_seed,
                                         u64 trial_index, bool exclude_zero = false) {
    if (d < 1) throw std::invalid_argument("random_sequence: need d >= 1");
    Xoshiro256ss gen(derive_seed(master_seed, pm.p, trial_index));
    ParameterSequence seq;
    seq.p = pm.p;
    seq.provenance = Provenance::random;
    seq.master_seed = master_seed;
    seq.trial_index = trial_index;
    seq.ks.resize(d);
    for (auto& k : seq.ks) {
        k = exclude_zero ? static_cast<u32>(1 + gen.uniform_below(pm.p - 1))
                         : static_cast<u32>(gen.uniform_below(pm.p));
    }
    return seq;
}

/// k_i = g^i mod p for i = 1..d. g must be a primitive root mod p unless
/// allow_any_generator is set (exploratory use). d may exceed the group
/// order p-1, in which case the sequence wraps.
inline ParameterSequence cyclic_sequence(u64 g, const PrimeModulus& pm, std::size_t d,
                                         bool allow_any_generator = false) {
    if (d < 1) throw std::invalid_argument("cyclic_sequence: need d >= 1");
    if (g == 0 || g >= pm.p) throw std::invalid_argument("cyclic_sequence: need 1 <= g < p");
    if (!allow_any_generator && !is_primitive_root(g, pm))
        throw std::invalid_argument("cyclic_sequence: g = " + std::to_string(g) +
                                    " is not a primitive root mod " + std::to_string(pm.p));
    ParameterSequence seq;
    seq.p = pm.p;
    seq.provenance = Provenance::cyclic;
    seq.generator = static_cast<u32>(g);
    seq.ks.resize(d);
    u64 x = 1;
    for (auto& k : seq.ks) {
        x = mul_mod(x, g, pm.p);
        k = static_cast<u32>(x);
    }
    return seq;
}

/// The auxiliary sets behind the provably-good sequence: a window of
/// primes R, offsets S = {1..s_max}, and T = {s * r^-1 mod p} deduplicated.
struct AikpsSets {
    double eps_a = 0.0;
    double window_hi = 0.0;          // L = log(p)^(1+eps_a); window is (L/2, L]
    std::vector<u64> primes_r;
    u64 s_max = 0;                   // S = {1, ..., s_max}
    std::vector<u32> set_t;          // sorted, deduplicated, subset of {0..p-1}
};

/// Build R, S, T for modulus p and parameter eps_a > 0. The log base is a
/// knob (natural log by default); the construction is base-agnostic
/// asymptotically but concrete sizes depend on it.
inline std::pair<AikpsSets, ParameterSequence> aikps_sequence(const PrimeModulus& pm, double eps_a,
                                                              double log_base = std::numbers::e) {
    if (!(eps_a > 0.0)) throw std::invalid_argument("aikps_sequence: need eps_a > 0");
    if (!(log_base > 1.0)) throw std::invalid_argument("aikps_sequence: need log_base > 1");

    const double logp = std::log(static_cast<double>(pm.p)) / std::log(log_base);
    AikpsSets sets;
    sets.eps_a = eps_a;
    sets.window_hi = std::pow(logp, 1.0 + eps_a);

    const double lo = sets.window_hi / 2.0;
    sets.primes_r = primes_in_range(static_cast<u64>(std::floor(lo)) + 1,
                                    static_cast<u64>(std::floor(sets.window_hi)));
    while (!sets.primes_r.empty() && static_cast<double>(sets.primes_r.front()) <= lo)
        sets.primes_r.erase(sets.primes_r.begin());
    if (sets.primes_r.empty())
        throw std::runtime_error("aikps_sequence: no primes in (L/2, L]; p too small for eps_a");

    sets.s_max = static_cast<u64>(std::ceil(std::pow(logp, 1.0 + 2.0 * eps_a)));

    std::vector<bool> member(pm.p, false);
    for (u64 r : sets.primes_r) {
        const u64 rinv = mod_inverse(r % pm.p, pm.p);
        u64 t = 0;
        for (u64 s = 1; s <= sets.s_max; ++s) {
            t += rinv;
            if (t >= pm.p) t -= pm.p;
            member[t] = true;
        }
    }
    for (u64 t = 0; t < pm.p; ++t) {
        if (member[t]) sets.set_t.push_back(static_cast<u32>(t));
    }
    if (sets.set_t.size() >= pm.p)
        throw std::runtime_error("aikps_sequence: T covers all of Z_p; construction degenerate");

    ParameterSequence seq;
    seq.p = pm.p;
    seq.provenance = Provenance::aikps;
    seq.eps_a = eps_a;
    seq.ks = sets.set_t;
    return {std::move(sets), std::move(seq)};
}

/// Exponential-sum statistics of the set T: the maximum over k in 1..p-1
/// of |sum_{t in T} e^(2 pi i t k / p)|, reported against the reference
/// value (log p)^(-eps_a) |T|. The comparison is report-only; the bound
/// is asymptotic and need not hold at small p.
struct ExpSumReport {
    double max_abs_sum = 0.0;
    u32 argmax_k = 0;
    std::size_t t_size = 0;
    double bound = 0.0;   // (log p)^(-eps_a) * |T|
    double ratio = 0.0;   // max_abs_sum / |T|
};

inline ExpSumReport exp_sum_report(const AikpsSets& sets, const PrimeModulus& pm,
                                          unsigned threads = 1,
                                          double log_base = std::numbers::e) {
    if (sets.set_t.empty()) throw std::invalid_argument("exp_sum_report: T is empty");
    const u64 p = pm.p;
    const std::vector<u32>& ts = sets.set_t;

    std::vector<double> cosv(p), sinv(p);
    for (u64 r = 0; r < p; ++r) {
        cosv[r] = cos_term(r, p);
        sinv[r] = sin_term(r, p);
    }

    // Fixed-size k-chunks; per-chunk maxima are reduced in chunk order so
    // the result does not depend on the thread count.
    constexpr u64 chunk_len = 1024;
    const std::size_t n_chunks = static_cast<std::size_t>((p - 2) / chunk_len) + 1;
    std::vector<std::pair<double, u32>> chunk_max(n_chunks, {-1.0, 0});

    parallel_for_index(n_chunks, threads, [&](std::size_t c) {
        const u64 k_begin = 1 + static_cast<u64>(c) * chunk_len;
        const u64 k_end = std::min<u64>(p, k_begin + chunk_len);
        std::vector<u64> residue(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) residue[i] = mul_mod(ts[i], k_begin, p);
        double best = -1.0;
        u32 best_k = 0;
        for (u64 k = k_begin; k < k_end; ++k) {
            double re = 0.0, im = 0.0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                re += cosv[residue[i]];
                im += sinv[residue[i]];
                residue[i] += ts[i];
                if (residue[i] >= p) residue[i] -= p;
            }
            const double mag = std::hypot(re, im);
            if (mag > best) {
                best = mag;
                best_k = static_cast<u32>(k);
            }
        }
        chunk_max[c] = {best, best_k};
    });

    ExpSumReport rep;
    rep.t_size = ts.size();
    for (const auto& [mag, k] : chunk_max) {
        if (mag > rep.max_abs_sum) {
            rep.max_abs_sum = mag;
            rep.argmax_k = k;
        }
    }
    const double logp = std::log(static_cast<double>(p)) / std::log(log_base);
    rep.bound = std::pow(logp, -sets.eps_a) * static_cast<double>(ts.size());
    rep.ratio = rep.max_abs_sum / static_cast<double>(ts.size());
    return rep;
}

} // namespace qfa
