#pragma once

// Reproducible random streams for batch runs.
//
// Stream version 1: child seed = splitmix64(base_seed ^ splitmix64(index + 1)),
// generator = std::mt19937_64 seeded with the child seed, uniform doubles
// built from the top 53 bits of each draw. All three steps are fully
// specified, so draws are identical across platforms and standard libraries.

#include <cstdint>
#include <random>

namespace sit {

inline constexpr int kRngStreamVersion = 1;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t child_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(base_seed ^ splitmix64(index + 1));
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi]; returns lo exactly when lo == hi.
    double uniform(double lo, double hi) { return lo == hi ? lo : lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace sit
