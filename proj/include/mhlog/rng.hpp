#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mhlog {

/// SplitMix64 (Steele, Lea, Flood 2014). Each call advances the state by the
/// golden-ratio increment 0x9E3779B97F4A7C15 and returns the mixed state:
///
///   z = (state += 0x9E3779B97F4A7C15)
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform01() maps the top 53 bits onto (0, 1]: ((x >> 11) + 1) * 2^-53.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Lemire-free modulo; bias is < n / 2^64.
  std::uint64_t below(std::uint64_t n) noexcept { return (*this)() % n; }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kSeedSplitMultiplier = 0x9E3779B97F4A7C15ULL;

/// Stream seed for replication (or sub-stream) i of a master seed.
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t i) noexcept {
  return master ^ (kSeedSplitMultiplier * (i + 1));
}

/// Inverse-CDF exponential draw from a fixed uniform u in (0, 1].
inline double exponential_from_uniform(double rate, double u) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
  return -std::log(u) / rate;
}

inline double sample_exponential(double rate, SplitMix64& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential rate must be > 0");
  return exponential_from_uniform(rate, rng.uniform01());
}

}  // namespace mhlog
