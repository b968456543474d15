#pragma once

#include <cstdint>
#include <limits>
#include <utility>

namespace bornsim {

/// Seeded SplitMix64 stream. Satisfies UniformRandomBitGenerator.
///
/// Substreams are derived from (master seed, stream index) so that trial t
/// draws the same numbers no matter how trials are distributed over workers.
///
/// Gaussian draws use the Box-Muller transform on two uniforms
///   u1 = ((x1 >> 11) + 0.5) * 2^-53,  u2 = ((x2 >> 11) + 0.5) * 2^-53
///   g1 = sqrt(-2 ln u1) cos(2 pi u2),   g2 = sqrt(-2 ln u1) sin(2 pi u2)
/// consumed as the pair (g1, g2). This is the whole algorithm; other
/// implementations can reproduce the streams from it.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed) : state_(mix(seed)) {}
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform on the open interval (0, 1).
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    std::pair<double, double> gaussian_pair();

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace bornsim
