#pragma once

// Closed-form acceptance probability of the combined automaton and the
// worst-case scan over all word lengths j not divisible by p.
//
// Everything reduces to f(j) = sum_i cos(2 pi k_i j / p). The scan keeps
// the residues k_i * j mod p rolling as j advances (one add and one
// conditional subtract per term), looks cosines up in a per-modulus
// table, and accumulates in the same order as cosine_sum, so a scan
// entry and a direct call at the same j are bitwise identical.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qfa/sequences.hpp"
#include "qfa/trig.hpp"

namespace qfa {

namespace detail {

// Plain summation below this length, Kahan-compensated above. Both the
// direct path and the scanner share the constant so their sums agree
// bitwise.
inline constexpr std::size_t k_kahan_threshold = 10000;

// Largest modulus for which the scanner materializes a cosine table.
inline constexpr u64 k_cos_table_max_p = u64{1} << 22;

template <typename TermAt>
double sum_terms(std::size_t d, TermAt&& term_at) {
    if (d <= k_kahan_threshold) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += term_at(i);
        return s;
    }
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double t = term_at(i);
        const double y = t - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

} // namespace detail

/// f(j) = sum_{i=1..d} cos(2 pi k_i j / p). j is reduced mod p; the
/// per-term residue k_i * j mod p is reduced exactly in integers before
/// any floating-point operation.
inline double cosine_sum(const ParameterSequence& seq, u64 j) {
    const u64 p = seq.p;
    const u64 jr = j % p;
    return detail::sum_terms(seq.ks.size(),
                             [&](std::size_t i) { return cos_term(mul_mod(seq.ks[i], jr, p), p); });
}

/// Acceptance probability of the word a^j: (f(j) / d)^2. Equals 1 exactly
/// when p divides j.
inline double accept_prob(const ParameterSequence& seq, u64 j) {
    const double d = static_cast<double>(seq.ks.size());
    const double s = cosine_sum(seq, j) / d;
    return s * s;
}

/// Worst case over non-members: max over j in 1..p-1 of accept_prob,
/// with the argmax (smallest j on ties) and the underlying |f| maximum.
struct AcceptanceProfile {
    u64 p = 0;
    std::size_t d = 0;
    double worst_eps = 0.0;
    u32 worst_j = 0;
    double max_abs_cosine_sum = 0.0;
    std::vector<double> per_j;   // per_j[j-1] = accept_prob(j), filled on request
};

namespace detail {

// Rolling-residue scan over j = 1..p/2 (the j <-> p-j mirror halves the
// range; cos_term folds residues so mirrored values are bitwise equal).
// Visits f(j) in ascending j and hands each |f| to `visit`, which may
// stop the scan early by returning false.
template <typename Visit>
void scan_half_range(const ParameterSequence& seq, Visit&& visit) {
    const u64 p = seq.p;
    const std::size_t d = seq.ks.size();
    std::optional<CosTable> table;
    if (p <= k_cos_table_max_p) table.emplace(p);

    std::vector<u64> residue(d, 0);
    const u64 j_max = p / 2;
    for (u64 j = 1; j <= j_max; ++j) {
        double s;
        if (table) {
            const CosTable& tbl = *table;
            s = sum_terms(d, [&](std::size_t i) {
                u64 r = residue[i] + seq.ks[i];
                if (r >= p) r -= p;
                residue[i] = r;
                return tbl[r];
            });
        } else {
            s = sum_terms(d, [&](std::size_t i) {
                u64 r = residue[i] + seq.ks[i];
                if (r >= p) r -= p;
                residue[i] = r;
                return cos_term(r, p);
            });
        }
        if (!visit(j, s)) return;
    }
}

} // namespace detail

inline AcceptanceProfile worst_case_epsilon(const ParameterSequence& seq, bool keep_per_j = false) {
    if (seq.p < 2) throw std::invalid_argument("worst_case_epsilon: need p >= 2");
    AcceptanceProfile prof;
    prof.p = seq.p;
    prof.d = seq.ks.size();
    if (keep_per_j) prof.per_j.assign(seq.p - 1, 0.0);

    const double d = static_cast<double>(seq.ks.size());
    double best = -1.0;
    u32 best_j = 1;
    detail::scan_half_range(seq, [&](u64 j, double s) {
        const double mag = std::fabs(s);
        if (mag > best) {
            best = mag;
            best_j = static_cast<u32>(j);
        }
        if (keep_per_j) {
            const double prob = (s / d) * (s / d);
            prof.per_j[j - 1] = prob;
            prof.per_j[seq.p - j - 1] = prob;   // mirror image
        }
        return true;
    });
    prof.max_abs_cosine_sum = best;
    prof.worst_eps = (best / d) * (best / d);
    prof.worst_j = best_j;
    return prof;
}

/// Strict derandomization target: true iff max_j |f(j)| < sqrt(eps) * d
/// for every j in 1..p-1. Boundary equality counts as failure. The
/// threshold's d can be overridden (d_for_threshold > 0) to use the
/// unrounded sequence-length formula instead of the integer length.
inline bool meets_bound(const ParameterSequence& seq, double eps, double d_for_threshold = -1.0) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("meets_bound: need 0 < eps < 1");
    const double d_thr =
        d_for_threshold > 0.0 ? d_for_threshold : static_cast<double>(seq.ks.size());
    const double threshold = std::sqrt(eps) * d_thr;
    bool ok = true;
    detail::scan_half_range(seq, [&](u64, double s) {
        if (std::fabs(s) >= threshold) {
            ok = false;
            return false;   // early exit: one violation settles it
        }
        return true;
    });
    return ok;
}

} // namespace qfa
