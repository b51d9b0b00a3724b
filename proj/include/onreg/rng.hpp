#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace onreg {

/// SplitMix64 finalizer; a bijective mixer used as a counter-based hash.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream` of a run seeded with `seed`. Streams depend only on
/// (seed, stream), never on the order in which they are requested.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// SplitMix64 generator (Weyl counter through the mixer above). Satisfies
/// UniformRandomBitGenerator; several times cheaper than mt19937_64, which
/// matters for the large game sweeps.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t x = state_;
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(x);
  }

 private:
  std::uint64_t state_;
};

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

// Portable uniform draws: std::uniform_real_distribution is not specified
// bit-for-bit across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

inline double standard_normal(Rng& rng) {
  // Box-Muller; u1 in (0, 1].
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// Uniform point in the closed Euclidean unit ball of R^d.
inline std::vector<double> uniform_in_ball(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  double norm = 0.0;
  do {
    norm = 0.0;
    // Marsaglia polar method; both outputs of each accepted pair are used.
    for (std::size_t i = 0; i < d; i += 2) {
      double a = 0.0, b = 0.0, s = 0.0;
      do {
        a = 2.0 * uniform01(rng) - 1.0;
        b = 2.0 * uniform01(rng) - 1.0;
        s = a * a + b * b;
      } while (s >= 1.0 || s == 0.0);
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      v[i] = a * f;
      if (i + 1 < d) v[i + 1] = b * f;
    }
    for (double x : v) norm += x * x;
  } while (norm == 0.0);
  const double radius = std::pow(uniform01(rng), 1.0 / static_cast<double>(d));
  const double scale = radius / std::sqrt(norm);
  for (double& x : v) x *= scale;
  return v;
}

}  // namespace onreg
