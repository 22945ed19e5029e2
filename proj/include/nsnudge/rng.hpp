#pragma once

#include <cmath>
#include <cstdint>

namespace nsnudge {

// Counted seed-splitting: every consumer of randomness (initial conditions,
// forcing phases, probe fields, sweep cells) draws from its own stream
// derived from (master seed, stream index), so results are reproducible
// regardless of evaluation order or sweep parallelism.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // standard normal via Box-Muller (no library distributions: their
    // algorithms are implementation-defined, this is bit-stable everywhere)
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }
};

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
    SplitMix64 g(master ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    g.next();
    return g.next();
}

}  // namespace nsnudge
