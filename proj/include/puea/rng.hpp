#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace puea::rng {

// SplitMix64 (Steele, Lea & Flood 2014). One 64-bit word of state, so every
// stochastic component of the pipeline can derive an independent stream from
// a hashed key. All randomness in this project flows through this engine and
// the explicit transforms below; nothing depends on library-specific
// distribution internals, which keeps results identical across toolchains.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

 private:
  std::uint64_t state_;
};

// SplitMix64 output mix, used as a standalone 64 -> 64 bit finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Substream key derivation: fold an index into a seed with the 64-bit golden
// ratio and re-mix. Chaining calls makes keys for (seed, a), (seed, a, b), ...
// Order matters: substream(s, a, b) != substream(s, b, a).
[[nodiscard]] constexpr std::uint64_t substream(std::uint64_t seed,
                                                std::uint64_t a) {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (a + 1));
}

[[nodiscard]] constexpr std::uint64_t substream(std::uint64_t seed,
                                                std::uint64_t a,
                                                std::uint64_t b) {
  return substream(substream(seed, a), b);
}

[[nodiscard]] constexpr std::uint64_t substream(std::uint64_t seed,
                                                std::uint64_t a,
                                                std::uint64_t b,
                                                std::uint64_t c) {
  return substream(substream(seed, a, b), c);
}

// Uniform double in [0, 1), 53 mantissa bits.
[[nodiscard]] inline double uniform01(SplitMix64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1]; safe as a log() argument.
[[nodiscard]] inline double uniform_pos(SplitMix64& g) {
  return static_cast<double>((g() >> 11) + 1) * 0x1.0p-53;
}

[[nodiscard]] inline double uniform(SplitMix64& g, double lo, double hi) {
  return lo + uniform01(g) * (hi - lo);
}

// Unbiased integer in [0, n) by rejection.
[[nodiscard]] inline std::uint64_t below(SplitMix64& g, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = g();
    if (r >= threshold) return r % n;
  }
}

// Standard normal via the Box-Muller transform (cosine branch). Exactly two
// uniforms per draw, so a substream that produces a single variate consumes
// a fixed, documented amount of the stream.
[[nodiscard]] inline double standard_normal(SplitMix64& g) {
  const double u1 = uniform_pos(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace puea::rng
