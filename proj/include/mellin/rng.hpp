#pragma once

// Counter-based random number generation.  Every variate is a pure function
// of (seed, stream, counters...), so draws are reproducible independently of
// evaluation order and safe to compute from any thread.

#include <cmath>
#include <cstdint>

#include "mellin/core.hpp"

namespace mellin {
namespace rng {

// Domain-separation tags for independent substreams under one seed.
inline constexpr std::uint64_t kStreamCoefficients = 0x11;
inline constexpr std::uint64_t kStreamSamplePoints = 0x22;
inline constexpr std::uint64_t kStreamTrial = 0x33;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t absorb(std::uint64_t h, std::uint64_t w) { return mix64(h ^ mix64(w)); }

inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix64(seed);
    h = absorb(h, stream);
    h = absorb(h, a);
    h = absorb(h, b);
    h = absorb(h, c);
    return h;
}

/// Uniform in [0, 1), 53-bit resolution.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                        std::uint64_t b, std::uint64_t c) {
    return static_cast<double>(hash_key(seed, stream, a, b, c) >> 11) * 0x1.0p-53;
}

/// Uniform in [lo, hi) by linear inverse CDF.
inline double uniform_range(double lo, double hi, std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return lo + uniform01(seed, stream, a, b, c) * (hi - lo);
}

struct GaussianPair {
    double z0, z1;
};

/// Two independent standard normals via Box-Muller on counters (c, c+1).
inline GaussianPair gaussian_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                                  std::uint64_t b, std::uint64_t c) {
    // u1 in (0,1] so log is finite
    const double u1 =
        (static_cast<double>(hash_key(seed, stream, a, b, c) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01(seed, stream, a, b, c + 1);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    return {rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2)};
}

/// Derived sub-seed, e.g. one per Monte Carlo trial.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return hash_key(seed, stream, index, 0, 0);
}

}  // namespace rng
}  // namespace mellin
