#pragma once

/// @file rng.hpp
/// Counter-based random streams: every draw is a pure function of
/// (seed, step index, blob index, dimension), so trajectories are reproducible
/// and independent of thread count or evaluation order.

#include <cstdint>
#include <cmath>

#include "cylflow/cyl_point.hpp"

namespace cylflow {

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in (0, 1), keyed by the full counter tuple.
inline double counter_uniform(std::uint64_t seed, std::uint64_t step,
                              std::uint64_t blob, std::uint64_t dim) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ step);
    k = mix64(k ^ blob);
    k = mix64(k + dim * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(k >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Two independent standard Gaussians (Box-Muller) for one (step, blob) key.
inline void counter_gaussian_pair(std::uint64_t seed, std::uint64_t step,
                                  std::uint64_t blob, double& g1, double& g2) {
    const double u1 = counter_uniform(seed, step, blob, 0);
    const double u2 = counter_uniform(seed, step, blob, 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    g1 = r * std::cos(two_pi * u2);
    g2 = r * std::sin(two_pi * u2);
}

} // namespace cylflow
