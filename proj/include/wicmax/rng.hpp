#pragma once

#include <cstdint>

namespace wicmax {

/// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Maps the top 53 bits of a 64-bit word onto [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Derives an independent stream key from a master seed and an index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index * kGoldenGamma + 0x632be59bd9b4e019ULL));
}

/// The i-th output (i >= 1) of a SplitMix64 generator seeded with `key`.
/// Lets a stream be read at random positions without holding state.
constexpr std::uint64_t stream_at(std::uint64_t key, std::uint64_t i) noexcept {
  return mix64(key + i * kGoldenGamma);
}

/// SplitMix64 generator.
///
/// Chosen because its output is fully specified by the 64-bit seed, so
/// every platform reproduces the same draws; all distributions below are
/// defined here rather than taken from <random> for the same reason.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }
  constexpr std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Uniform real in [0, 1).
  constexpr double unit() noexcept { return to_unit(next()); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Independent child generator; does not advance this one.
  [[nodiscard]] constexpr Rng split(std::uint64_t index) const noexcept {
    return Rng(derive_seed(state_, index));
  }

 private:
  std::uint64_t state_;
};

}  // namespace wicmax
