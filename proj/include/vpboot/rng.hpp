#pragma once

// Seedable, splittable random streams. Every stochastic draw in the library
// comes from a stream keyed by (master seed, domain, indices...), so results
// never depend on evaluation order or thread count.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace vpboot {

/// Finaliser of the SplitMix64 generator (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent 64-bit seed from a master seed and a key path.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
  std::uint64_t position = 1;
  for (std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k + position * 0x9E3779B97F4A7C15ULL));
    ++position;
  }
  return h;
}

/// Stream domains keep observed replicates, validation tables and bootstrap
/// resamples from sharing random numbers.
enum class StreamDomain : std::uint64_t {
  kObserved = 1,
  kValidation = 2,
  kBootstrap = 3,
  kNiches = 4,
};

/// SplitMix64 engine; satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(SplitMix64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(SplitMix64& rng, double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal via Box-Muller; spelled out so draws are identical across
/// standard library implementations.
inline double standard_normal(SplitMix64& rng) noexcept {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Unbiased integer in [0, bound) by rejection.
inline std::uint64_t uniform_index(SplitMix64& rng, std::uint64_t bound) noexcept {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace vpboot
