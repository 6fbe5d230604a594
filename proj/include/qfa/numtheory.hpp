#pragma once

// Exact modular arithmetic on 64-bit integers: deterministic primality,
// trial-division factorization, powers, inverses and primitive roots.
// All operations are pure; intermediates use 128-bit arithmetic so no
// input in the supported range can overflow.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qfa {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

/// base^exp mod m, overflow-free for any 64-bit inputs (m >= 1).
inline u64 mod_pow(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    u64 b = base % m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, b, m);
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    return result;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int r) {
    u64 x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Deterministic primality test for the full 64-bit range.
/// Uses the Miller-Rabin witness set {2,3,5,7,11,13,17,19,23,29,31,37},
/// which is known to be exact for all n < 3.3 * 10^24.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!detail::miller_rabin_witness(n, a, d, r)) return false;
    }
    return true;
}

/// Canonical factorization of n >= 2, sorted by prime, exponents >= 1.
/// Trial division with a 2/3/5 wheel; intended for n < 2^32-ish scale
/// (factoring p-1 for the primes this library works with).
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
    std::vector<std::pair<u64, int>> factors;
    auto strip = [&](u64 q) {
        if (n % q == 0) {
            int e = 0;
            while (n % q == 0) {
                n /= q;
                ++e;
            }
            factors.emplace_back(q, e);
        }
    };
    strip(2);
    strip(3);
    strip(5);
    static constexpr int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    u64 q = 7;
    int w = 0;
    while (q <= n / q) {
        strip(q);
        q += wheel[w];
        w = (w + 1) & 7;
    }
    if (n > 1) factors.emplace_back(n, 1);
    return factors;
}

/// Modular inverse of r mod prime p via extended Euclid; result in [1, p).
inline u64 mod_inverse(u64 r, u64 p) {
    if (r == 0 || r >= p) throw std::invalid_argument("mod_inverse: need 1 <= r < p");
    std::int64_t t = 0, new_t = 1;
    std::int64_t a = static_cast<std::int64_t>(p), b = static_cast<std::int64_t>(r);
    while (b != 0) {
        std::int64_t q = a / b;
        t = std::exchange(new_t, t - q * new_t);
        a = std::exchange(b, a - q * b);
    }
    if (a != 1) throw std::invalid_argument("mod_inverse: r not invertible mod p");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<u64>(t);
}

/// A verified prime with the factorization of p-1 cached.
/// The factorization drives primitive-root order checks.
struct PrimeModulus {
    u64 p = 0;
    std::vector<std::pair<u64, int>> factors_p_minus_1;

    static PrimeModulus create(u64 p) {
        if (p < 2 || p >= (1ull << 32))
            throw std::invalid_argument("PrimeModulus: need 2 <= p < 2^32");
        if (!is_prime(p)) throw std::invalid_argument("PrimeModulus: p is not prime");
        PrimeModulus pm;
        pm.p = p;
        if (p > 2) pm.factors_p_minus_1 = factorize(p - 1);
        else pm.factors_p_minus_1 = {};  // p-1 = 1 has the empty factorization
        return pm;
    }

    /// phi(p-1) = number of primitive roots mod p.
    u64 phi_p_minus_1() const {
        u64 phi = p - 1;
        for (auto [q, e] : factors_p_minus_1) phi = phi / q * (q - 1);
        return phi;
    }
};

/// True iff the multiplicative order of g mod p is exactly p-1,
/// tested as g^((p-1)/q) != 1 for every prime q | p-1.
inline bool is_primitive_root(u64 g, const PrimeModulus& pm) {
    if (g == 0 || g >= pm.p) return false;
    if (pm.p == 2) return g == 1;
    for (auto [q, e] : pm.factors_p_minus_1) {
        if (mod_pow(g, (pm.p - 1) / q, pm.p) == 1) return false;
    }
    return true;
}

/// All primitive roots mod p in increasing order; the count is phi(p-1).
inline std::vector<u64> primitive_roots(const PrimeModulus& pm) {
    if (pm.p < 3) throw std::invalid_argument("primitive_roots: need p >= 3");
    std::vector<u64> roots;
    roots.reserve(pm.phi_p_minus_1());
    // Find the smallest primitive root by direct search, then generate the
    // rest as g0^u for u coprime to p-1. Much faster than testing every g
    // and still returns them sorted.
    u64 g0 = 0;
    for (u64 g = 2; g < pm.p; ++g) {
        if (is_primitive_root(g, pm)) {
            g0 = g;
            break;
        }
    }
    u64 x = g0;
    for (u64 u = 1; u < pm.p - 1; ++u) {
        if (std::gcd(u, pm.p - 1) == 1) roots.push_back(x);
        x = mul_mod(x, g0, pm.p);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Primes in [lo, hi] by a simple sieve. Used for scan ranges and the
/// prime windows of the residue-set construction.
inline std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi < 2 || hi < lo) return out;
    std::vector<bool> composite(hi + 1, false);
    for (u64 i = 2; i * i <= hi; ++i) {
        if (!composite[i]) {
            for (u64 j = i * i; j <= hi; j += i) composite[j] = true;
        }
    }
    for (u64 i = std::max<u64>(lo, 2); i <= hi; ++i) {
        if (!composite[i]) out.push_back(i);
    }
    return out;
}

} // namespace qfa
