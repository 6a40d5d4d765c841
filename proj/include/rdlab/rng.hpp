#pragma once

// Deterministic RNG: splitmix64 streams keyed by (seed, stream).  Every
// sampling routine takes an explicit stream so reruns are bit-identical.

#include <cstdint>

namespace rdlab {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    int next_index(int m) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(m)); }
};

} // namespace rdlab
