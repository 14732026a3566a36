// Counter-based random streams.
//
// Every draw is a pure function of (seed, index), so replications, paths and
// worker threads can consume disjoint index ranges without sharing state and
// without the results depending on scheduling order.
#pragma once

#include <cmath>
#include <cstdint>

namespace ektail {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Child seed for replication/path `index` under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master + kGoldenGamma) + kGoldenGamma * (index + 1));
}

// Uniform draws on the open interval (0,1), addressable by counter.
class UniformStream {
  public:
    explicit UniformStream(std::uint64_t seed) noexcept : key_(mix64(seed + kGoldenGamma)) {}

    // i-th uniform; strictly inside (0,1) so log/power transforms stay finite.
    double at(std::uint64_t i) const noexcept {
        const std::uint64_t bits = mix64(key_ + kGoldenGamma * (i + 1));
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    double next() noexcept { return at(counter_++); }

    std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Standard normal draws via Box-Muller on consecutive uniform pairs.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) noexcept : uniforms_(seed) {}

    double at(std::uint64_t i) const noexcept {
        const std::uint64_t pair = i / 2;
        const double u1 = uniforms_.at(2 * pair);
        const double u2 = uniforms_.at(2 * pair + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return (i % 2 == 0) ? r * std::cos(a) : r * std::sin(a);
    }

    double next() noexcept { return at(counter_++); }

  private:
    UniformStream uniforms_;
    std::uint64_t counter_ = 0;
};

}  // namespace ektail
