#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sensegate {

// SplitMix64 finalizer (Steele, Lea & Flood). One invertible 64-bit mix step;
// used for seed expansion and for deriving per-run seeds from tuples.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable seed derivation: h = sm(base), then h = sm(h ^ part) for each part,
// left to right. This formula is part of the output contract (sweep rows are
// reproducible from it) and must not change between releases.
template <class... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t base, Parts... parts) noexcept {
  std::uint64_t h = splitmix64(base);
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(parts))), ...);
  return h;
}

// xoshiro256++ 1.0 (Blackman & Vigna), seeded through SplitMix64. A named,
// portable generator: the byte stream depends only on this header, not on the
// standard library build. Distribution transforms below are likewise pinned
// (bit-shift uniforms, Box-Muller normals, inverse-CDF geometric) rather than
// delegated to <random>, whose distributions are implementation-defined.
class Rng {
public:
  explicit constexpr Rng(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x = splitmix64(x);
      word = x;
    }
  }

  constexpr std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Box-Muller, cosine branch (the sine mate is discarded).
  double normal(double mu, double sigma) noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    return mu + sigma * r * std::cos(theta);
  }

  // Geometric on {1, 2, ...} with mean max(mean, 1), via inverse CDF.
  std::uint64_t geometric_min1(double mean) noexcept {
    if (!(mean > 1.0)) return 1;
    const double p = 1.0 / mean;
    const double u = uniform_open();
    const double len = 1.0 + std::floor(std::log(u) / std::log1p(-p));
    if (len >= 0x1.0p40) return UINT64_C(1) << 40; // tail guard, ~10^12
    return static_cast<std::uint64_t>(len);
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

} // namespace sensegate
