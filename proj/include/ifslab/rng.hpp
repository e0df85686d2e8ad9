#pragma once

#include <cstdint>

namespace ifslab {

/// SplitMix64 (Steele, Lea, Flood 2014) used in counter mode: the k-th draw
/// for a seed is mix(seed + (k + 1) * 0x9E3779B97F4A7C15). The stream is a
/// pure function of (seed, k), so it is reproducible on any platform and in
/// any language with 64-bit unsigned wraparound arithmetic.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Value at an absolute counter position; does not advance the stream.
  std::uint64_t at(std::uint64_t k) const noexcept { return mix(seed_ + (k + 1) * kGamma); }

  std::uint64_t next() noexcept { return at(counter_++); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) as floor(next_unit() * bound), bound > 0.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const auto k = static_cast<std::uint64_t>(next_unit() * static_cast<double>(bound));
    return k < bound ? k : bound - 1;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace ifslab
