#pragma once

#include <cmath>
#include <cstdint>

#include "displacemon/core.hpp"

namespace displacemon::rng {

// splitmix64 finalizer: a counter-based bijective mixer. Substream k of a
// 64-bit seed is mix(seed, k); streams are independent and order-free, so
// trajectory ensembles reduce deterministically regardless of scheduling.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    // 53-bit mantissa in (0,1]; never returns 0 so log() below is safe.
    return (static_cast<double>(mix(seed, counter) >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller on substreams (2*counter, 2*counter+1).
inline double standard_normal(std::uint64_t seed, std::uint64_t counter) {
    const double u1 = uniform01(seed, 2 * counter);
    const double u2 = uniform01(seed, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

} // namespace displacemon::rng
