#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace colsim {

// Deterministic 64-bit generator used everywhere in the simulator.
//
// The generator is SplitMix64 (Steele, Lea, Flood's mix function). It was
// chosen over std::mt19937_64 because the standard *distributions* layered on
// top of any engine are implementation-defined, which would make runs differ
// between standard libraries. All draws needed by the simulator (uniform
// doubles, bernoulli, bounded integers, normals, shuffles) are implemented
// here from raw 64-bit output, so a (config, seed) pair reproduces the same
// trajectory on every platform.
//
// Stream discipline: each run r of a scenario draws from an independent
// stream seeded with split(seed, r). split(seed, r) is the (r+1)-th output of
// a SplitMix64 sequence started at `seed`, i.e. mix(seed + (r+1) * GAMMA).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform double in [0, 1), 53 significant bits, exactly one draw.
  double next_double() noexcept {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
  }

  // True with probability p; consumes exactly one draw for any p.
  bool bernoulli(double p) noexcept { return next_double() < p; }

  // Uniform integer in [0, n); multiply-shift reduction, one draw.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(operator()()) * n) >> 64);
  }

  // Standard normal via Box-Muller; consumes exactly two draws (no caching,
  // so the consumption count per call is fixed).
  double next_normal() noexcept {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double next_lognormal(double mu, double sigma) noexcept {
    return std::exp(mu + sigma * next_normal());
  }

  // Fisher-Yates; consumes exactly v.size()-1 draws when size >= 2.
  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t state() const noexcept { return state_; }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t split(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix(seed + (stream + 1) * kGamma);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr double kPi = 3.14159265358979323846264338327950288;

  std::uint64_t state_;
};

}  // namespace colsim
