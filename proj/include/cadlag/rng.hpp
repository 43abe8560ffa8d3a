#pragma once

#include <cmath>
#include <cstdint>

namespace cadlag {

// SplitMix64 finalizer (Steele, Lea & Flood; Vigna's fixed-increment form).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based deterministic stream. Same (key, counter) gives the same
/// output on every platform; split() derives statistically independent child
/// streams, so inner/outer draws of a composed sampler never share state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_(mix64(seed + 0x9E3779B97F4A7C15ull)) {}

  RandomStream split(std::uint64_t label) const {
    RandomStream child(0);
    child.key_ = mix64(key_ ^ mix64(label + 0xD1B54A32D192ED03ull));
    child.ctr_ = 0;
    return child;
  }

  std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * 0x9E3779B97F4A7C15ull); }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double next_uniform(double a, double b) { return a + (b - a) * next_unit(); }

  /// Exponential with the given rate (> 0).
  double next_exponential(double rate) { return -std::log1p(-next_unit()) / rate; }

  /// Standard normal via Box-Muller (pairs cached).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// +1 or -1 with equal probability.
  double next_sign() { return (next_u64() & 1ull) ? 1.0 : -1.0; }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream labels for the roles of a composed sampler.
inline constexpr std::uint64_t kRoleInner = 0x696E6E6572ull;  // "inner"
inline constexpr std::uint64_t kRoleOuter = 0x6F75746572ull;  // "outer"

}  // namespace cadlag
