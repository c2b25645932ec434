#pragma once

// Portable random streams.
//
// Every random quantity in the library is drawn from an Rng built from an
// explicit seed plus a short list of stream keys (draw index, test-point
// index, block index, ...). The generator is xoshiro256** seeded through
// SplitMix64, and the normal/gamma/beta transforms are implemented here
// rather than taken from <random>, whose distributions are
// implementation-defined, so outputs do not change with the standard
// library in use.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace dpgp {

/// SplitMix64 finalizer; also used to fold stream keys into a seed.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent 64-bit seed for the stream identified by `keys`.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> keys) noexcept;

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept
      : Rng(derive_seed(seed, keys)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1); never returns 0.
  double uniform_open() noexcept;
  /// Uniform integer in [0, bound) without modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal via the Marsaglia polar method (pairs are cached).
  double normal() noexcept;
  /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the U^(1/shape)
  /// boost.
  double gamma(double shape) noexcept;
  /// Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
  double beta(double a, double b) noexcept;

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dpgp
