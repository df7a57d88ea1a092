#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sgvqa {

// splitmix64 finalizer; used both to condition seeds and to mix stream tags.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ull));
}

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard, and all variate conversions below are implemented explicitly,
/// so draw sequences are identical across platforms and standard libraries.
/// Each worker owns its own Rng; streams are derived by tag mixing.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection keeps the draw unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = bits();
    while (v >= limit) v = bits();
    return v % n;
  }

  /// Standard normal via Box-Muller; always consumes exactly two draws.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson via inversion by sequential search; fine for small means.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double product = uniform();
    int count = 0;
    while (product > limit) {
      product *= uniform();
      ++count;
    }
    return count;
  }

 private:
  std::mt19937_64 engine_;
};

// Stream tags for deriving independent substreams from one master seed.
enum class Stream : std::uint64_t {
  Layout = 1,
  PartPerturb = 2,
  Texture = 3,
  Questions = 4,
  Perception = 5,
};

inline Rng derive_rng(std::uint64_t seed, std::uint64_t entity_id, Stream stream,
                      std::uint64_t extra = 0) {
  return Rng(mix64(mix64(mix64(seed, entity_id), static_cast<std::uint64_t>(stream)), extra));
}

}  // namespace sgvqa
