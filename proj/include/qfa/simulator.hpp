#pragma once

// Explicit state-vector oracle for the combined automaton: the three
// unitaries are materialized as dense complex matrices and words a^j are
// run by repeated matrix application. This is deliberately independent
// of the closed-form acceptance path so the two can check each other.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qfa/sequences.hpp"
#include "qfa/trig.hpp"

namespace qfa {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

struct UnitaryMatrix {
    std::size_t dim = 0;
    std::vector<Complex> entries;   // row-major

    static UnitaryMatrix identity(std::size_t n) {
        UnitaryMatrix u;
        u.dim = n;
        u.entries.assign(n * n, Complex{});
        for (std::size_t i = 0; i < n; ++i) u.entries[i * n + i] = 1.0;
        return u;
    }

    Complex& at(std::size_t row, std::size_t col) { return entries[row * dim + col]; }
    const Complex& at(std::size_t row, std::size_t col) const { return entries[row * dim + col]; }
};

inline UnitaryMatrix dagger(const UnitaryMatrix& u) {
    UnitaryMatrix out;
    out.dim = u.dim;
    out.entries.resize(u.dim * u.dim);
    for (std::size_t r = 0; r < u.dim; ++r)
        for (std::size_t c = 0; c < u.dim; ++c) out.at(c, r) = std::conj(u.at(r, c));
    return out;
}

inline UnitaryMatrix multiply(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    if (a.dim != b.dim) throw std::invalid_argument("multiply: dimension mismatch");
    UnitaryMatrix out;
    out.dim = a.dim;
    out.entries.assign(a.dim * a.dim, Complex{});
    for (std::size_t r = 0; r < a.dim; ++r) {
        for (std::size_t k = 0; k < a.dim; ++k) {
            const Complex arv = a.at(r, k);
            if (arv == Complex{}) continue;
            for (std::size_t c = 0; c < a.dim; ++c) out.at(r, c) += arv * b.at(k, c);
        }
    }
    return out;
}

inline StateVector apply_matrix(const UnitaryMatrix& u, std::span<const Complex> state) {
    if (u.dim != state.size()) throw std::invalid_argument("apply_matrix: dimension mismatch");
    StateVector out(u.dim, Complex{});
    for (std::size_t r = 0; r < u.dim; ++r) {
        Complex s{};
        for (std::size_t c = 0; c < u.dim; ++c) s += u.at(r, c) * state[c];
        out[r] = s;
    }
    return out;
}

inline double state_norm(std::span<const Complex> state) {
    double n = 0.0;
    for (const Complex& a : state) n += std::norm(a);
    return std::sqrt(n);
}

/// max |(U^dagger U - I)_{rc}|
inline double unitarity_error(const UnitaryMatrix& u) {
    double worst = 0.0;
    for (std::size_t r = 0; r < u.dim; ++r) {
        for (std::size_t c = 0; c < u.dim; ++c) {
            Complex s{};
            for (std::size_t k = 0; k < u.dim; ++k) s += std::conj(u.at(k, r)) * u.at(k, c);
            if (r == c) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

enum class CompletionMethod { householder, gram_schmidt };

namespace detail {

inline void require_unit(std::span<const Complex> alpha, const char* who) {
    if (alpha.empty()) throw std::invalid_argument(std::string(who) + ": empty vector");
    if (std::fabs(state_norm(alpha) - 1.0) > 1e-10)
        throw std::invalid_argument(std::string(who) + ": input is not a unit vector");
}

inline UnitaryMatrix complete_householder(std::span<const Complex> alpha) {
    const std::size_t n = alpha.size();
    // Reflect across v = alpha + phase * e_1, the sign choice that
    // maximizes |v_1|; then fix the first column's phase so U e_1 = alpha.
    const Complex a0 = alpha[0];
    const double a0m = std::abs(a0);
    const Complex phase = a0m > 0.0 ? a0 / a0m : Complex{1.0, 0.0};

    std::vector<Complex> v(alpha.begin(), alpha.end());
    v[0] += phase;
    double vn2 = 0.0;
    for (const Complex& x : v) vn2 += std::norm(x);

    UnitaryMatrix u = UnitaryMatrix::identity(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) u.at(r, c) -= 2.0 * v[r] * std::conj(v[c]) / vn2;
    // Column 0 of H * diag(-phase, 1, ..., 1)
    for (std::size_t r = 0; r < n; ++r) u.at(r, 0) *= -phase;
    return u;
}

inline UnitaryMatrix complete_gram_schmidt(std::span<const Complex> alpha) {
    const std::size_t n = alpha.size();
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(alpha[i]) > std::abs(alpha[pivot])) pivot = i;

    // Columns: alpha, then standard basis vectors skipping the pivot row;
    // modified Gram-Schmidt with one reorthogonalization pass.
    std::vector<StateVector> cols;
    cols.reserve(n);
    cols.emplace_back(alpha.begin(), alpha.end());
    for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
        if (i == pivot) continue;
        StateVector e(n, Complex{});
        e[i] = 1.0;
        cols.push_back(std::move(e));
    }
    for (std::size_t c = 0; c < n; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < c; ++prev) {
                Complex proj{};
                for (std::size_t r = 0; r < n; ++r) proj += std::conj(cols[prev][r]) * cols[c][r];
                for (std::size_t r = 0; r < n; ++r) cols[c][r] -= proj * cols[prev][r];
            }
        }
        const double nrm = state_norm(cols[c]);
        if (nrm < 1e-8) throw std::runtime_error("gram_schmidt completion: rank deficiency");
        for (auto& x : cols[c]) x /= nrm;
    }
    UnitaryMatrix u;
    u.dim = n;
    u.entries.resize(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) u.at(r, c) = cols[c][r];
    return u;
}

} // namespace detail

/// A unitary whose first column is the given unit vector.
inline UnitaryMatrix unitary_with_first_column(std::span<const Complex> alpha,
                                               CompletionMethod method = CompletionMethod::householder) {
    detail::require_unit(alpha, "unitary_with_first_column");
    return method == CompletionMethod::householder ? detail::complete_householder(alpha)
                                                   : detail::complete_gram_schmidt(alpha);
}

/// A unitary whose first row is the given unit vector; for real alpha it
/// maps alpha to e_1. Realized as the adjoint of a first-column
/// completion of the conjugate.
inline UnitaryMatrix unitary_with_first_row(std::span<const Complex> alpha,
                                            CompletionMethod method = CompletionMethod::householder) {
    detail::require_unit(alpha, "unitary_with_first_row");
    std::vector<Complex> conj_alpha(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) conj_alpha[i] = std::conj(alpha[i]);
    return dagger(unitary_with_first_column(conj_alpha, method));
}

/// The 2d-state machine: pair i occupies coordinates (2i, 2i+1) for
/// 0-based i, i.e. q_{i,0} at 2(i-1) and q_{i,1} at 2(i-1)+1 in the
/// 1-based labeling. Start and accept state are both q_{1,0}.
struct QfaMachine {
    u64 p = 0;
    std::size_t d = 0;
    std::vector<u32> ks;     // rotation parameters, one per pair
    UnitaryMatrix v_left;    // left endmarker
    UnitaryMatrix v_letter;  // one input letter
    UnitaryMatrix v_right;   // right endmarker
    std::size_t start_index = 0;
    std::size_t accept_index = 0;
};

/// Build the machine for a parameter sequence: v_left spreads q_{1,0}
/// into the uniform superposition over the q_{i,0}, v_letter rotates each
/// pair by 2 pi k_i / p, v_right collects the q_{i,0} amplitudes back
/// onto q_{1,0} (first-row completion) and leaves every q_{i,1} fixed.
inline QfaMachine build_qfa(const ParameterSequence& seq,
                            CompletionMethod method = CompletionMethod::householder) {
    const std::size_t d = seq.ks.size();
    if (d < 1) throw std::invalid_argument("build_qfa: need d >= 1");
    const std::size_t dim = 2 * d;

    QfaMachine m;
    m.p = seq.p;
    m.d = d;
    m.ks = seq.ks;

    std::vector<Complex> uniform(d, Complex{1.0 / std::sqrt(static_cast<double>(d)), 0.0});
    const UnitaryMatrix spread = unitary_with_first_column(uniform, method);
    const UnitaryMatrix collect = unitary_with_first_row(uniform, method);

    // Embed a d x d block on the even (q_{i,0}) coordinates, identity on
    // the odd (q_{i,1}) coordinates.
    auto embed_even = [&](const UnitaryMatrix& block) {
        UnitaryMatrix u = UnitaryMatrix::identity(dim);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) u.at(2 * r, 2 * c) = block.at(r, c);
        return u;
    };
    m.v_left = embed_even(spread);
    m.v_right = embed_even(collect);

    m.v_letter = UnitaryMatrix::identity(dim);
    for (std::size_t i = 0; i < d; ++i) {
        const double c = cos_term(seq.ks[i], seq.p);
        const double s = sin_term(seq.ks[i], seq.p);
        m.v_letter.at(2 * i, 2 * i) = c;
        m.v_letter.at(2 * i, 2 * i + 1) = -s;
        m.v_letter.at(2 * i + 1, 2 * i) = s;
        m.v_letter.at(2 * i + 1, 2 * i + 1) = c;
    }
    return m;
}

/// Amplitudes (cos, sin) of the two-state rotation automaton U_k after
/// reading a^j, with exact integer angle reduction.
inline std::pair<double, double> single_rotation_state(u64 k, u64 j, u64 p) {
    const u64 r = mul_mod(k % p, j % p, p);
    return {cos_term(r, p), sin_term(r, p)};
}

/// Run the machine on a^j and return the accept probability: the squared
/// magnitude of the q_{1,0} amplitude after left endmarker, j letters and
/// right endmarker. Letters are applied (j mod p) times (the letter
/// matrix has period p); with fast_letter_power the block rotations are
/// evaluated directly at angle 2 pi k_i j / p instead of iterating.
inline double run(const QfaMachine& m, u64 j, bool fast_letter_power = false) {
    StateVector state(2 * m.d, Complex{});
    state[m.start_index] = 1.0;
    state = apply_matrix(m.v_left, state);

    const u64 reps = j % m.p;
    if (fast_letter_power) {
        // The i-th pair block is a rotation by 2 pi k_i / p; its reps-th
        // power rotates by 2 pi (k_i * reps mod p) / p.
        StateVector next(state.size());
        for (std::size_t i = 0; i < m.d; ++i) {
            const u64 r = mul_mod(m.ks[i], reps, m.p);
            const double c = cos_term(r, m.p);
            const double s = sin_term(r, m.p);
            next[2 * i] = c * state[2 * i] - s * state[2 * i + 1];
            next[2 * i + 1] = s * state[2 * i] + c * state[2 * i + 1];
        }
        state = std::move(next);
    } else {
        for (u64 t = 0; t < reps; ++t) state = apply_matrix(m.v_letter, state);
    }
    state = apply_matrix(m.v_right, state);
    return std::norm(state[m.accept_index]);
}

} // namespace qfa
