#pragma once

// Platform-independent randomness for reproducible experiments.
//
// Seed derivation uses the splitmix64 finalizer as a mixing function;
// the stream generator is xoshiro256** seeded from a splitmix64 chain,
// the initialization its authors recommend. Residues are drawn by
// rejection so every value in [0, n) is exactly equally likely.

#include <array>
#include <cstdint>

namespace qfa {

/// splitmix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derived seed for work item (a, b) under a master seed. Work items keyed
/// this way can run in any order, on any number of threads, and still
/// produce identical streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return splitmix64_mix(splitmix64_mix(splitmix64_mix(master) ^ a) ^ b);
}

/// xoshiro256** 1.0 (Blackman, Vigna 2018).
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& word : state_) {
            z = splitmix64_mix(z);
            word = z;
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw from [0, n), unbiased via rejection from below:
    /// values < 2^64 mod n are discarded, leaving a whole number of
    /// copies of each residue class.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t r;
        do {
            r = next();
        } while (r < threshold);
        return r % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

} // namespace qfa
