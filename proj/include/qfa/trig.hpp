#pragma once

// Trigonometric terms at the p-th roots of unity, with exact integer
// angle reduction: the residue r = k*j mod p is reduced first, then the
// angle 2*pi*r/p is formed. Folding r onto [0, p/2] before calling cos
// makes the identity cos(2*pi*(p-r)/p) = cos(2*pi*r/p) hold bitwise,
// which keeps mirror-symmetric scans exactly tied.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qfa/numtheory.hpp"

namespace qfa {

inline constexpr double k_two_pi = 2.0 * std::numbers::pi;

/// cos(2*pi*r/p) for a residue r in [0, p).
inline double cos_term(u64 r, u64 p) {
    const u64 folded = (r > p - r) ? p - r : r;
    return std::cos(k_two_pi * (static_cast<double>(folded) / static_cast<double>(p)));
}

/// sin(2*pi*r/p) for a residue r in [0, p). Odd symmetry is applied the
/// same way so sin(2*pi*(p-r)/p) == -sin(2*pi*r/p) bitwise.
inline double sin_term(u64 r, u64 p) {
    if (r == 0) return 0.0;
    const bool upper = r > p - r;
    const u64 folded = upper ? p - r : r;
    const double s = std::sin(k_two_pi * (static_cast<double>(folded) / static_cast<double>(p)));
    return upper ? -s : s;
}

/// Precomputed cos_term values for all residues of a fixed modulus.
/// Entries are bitwise identical to direct cos_term calls.
class CosTable {
public:
    explicit CosTable(u64 p) : p_(p), table_(p) {
        for (u64 r = 0; r <= p / 2; ++r) table_[r] = cos_term(r, p);
        for (u64 r = p / 2 + 1; r < p; ++r) table_[r] = table_[p - r];
    }

    double operator[](u64 r) const { return table_[r]; }
    u64 modulus() const { return p_; }

private:
    u64 p_;
    std::vector<double> table_;
};

} // namespace qfa
