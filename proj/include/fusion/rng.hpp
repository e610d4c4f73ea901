#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace fusion {

/// SplitMix64 finalizer. Used to derive well-mixed engine seeds from
/// (master seed, stream index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed of the `index`-th substream of `master`. Counter-based: the value
/// depends only on (master, index), never on which worker draws it.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + 0x9e3779b97f4a7c15ull * (index + 1));
}

/// Seeded random stream. Normal variates are produced by an explicit
/// Box-Muller transform (no cached second value, no distribution state),
/// so the mapping from engine output to samples is fixed and a stream can
/// be reproduced bit-exactly from its seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::uint64_t index) {
    return Rng(substream_seed(master, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform01_open() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal (consumes two engine draws).
  double normal() {
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Circularly symmetric complex normal with E{|z|^2} = variance.
  /// One Box-Muller pair feeds both components.
  std::complex<double> complex_normal(double variance) {
    if (variance == 0.0) return {0.0, 0.0};
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-variance * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fusion
