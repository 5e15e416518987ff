#pragma once

#include <cmath>
#include <cstdint>

namespace dspp {

// Splitmix64 finalizer. All randomness in the library flows through this so
// that generated problems and noise are bit-reproducible across platforms
// (std:: distributions are not pinned by the standard).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Sequential splitmix64 stream.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  private:
    std::uint64_t state_;
};

/// Counter-based Gaussian sampler: gauss(seed, stream, index) is a pure
/// function, so a noise matrix is fully determined by (seed, stream) and the
/// entry's linear index. Box-Muller on two splitmix64-derived uniforms.
inline double counter_gauss(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t key = mix64(mix64(seed ^ mix64(stream)) ^ index);
    const std::uint64_t a = mix64(key);
    const std::uint64_t b = mix64(key ^ 0xd1342543de82ef95ULL);
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace dspp
