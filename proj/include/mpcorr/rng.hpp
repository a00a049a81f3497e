#pragma once

#include <cmath>
#include <cstdint>

namespace mpcorr {

/// PCG32 generator (O'Neill, pcg-random.org, minimal variant).
///
/// Chosen over std::mt19937 + std::*_distribution because the standard
/// distributions are implementation-defined; golden files and seeded trial
/// farms need a stream that is stable across compilers. Streams are selected
/// explicitly, so parallel trials can partition by (seed, stream) without
/// overlap.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = 0U;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += splitmix64(seed);
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller. Always consumes exactly two uniforms,
    /// so the stream position is independent of past call history.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        // Guard against log(0).
        double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Zero-mean unit-variance uniform draw (support [-sqrt(3), sqrt(3)]).
    double uniform_unit_variance() { return 1.7320508075688772935 * (2.0 * uniform() - 1.0); }

    /// Random sign in {-1.0, +1.0}.
    double sign() { return (next_u32() & 1u) ? 1.0 : -1.0; }

    /// Uniform integer in [0, n).
    std::uint32_t below(std::uint32_t n) {
        // Multiply-shift bounded draw; bias is < 2^-32 and irrelevant here.
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(next_u32()) * n) >> 32);
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
    std::uint64_t inc_;
};

}  // namespace mpcorr
