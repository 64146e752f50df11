#ifndef TRPAPR_RANDOM_HPP
#define TRPAPR_RANDOM_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "trpapr/signal.hpp"

namespace trpapr {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; gives each (master, stream, index) its own seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ stream) ^ index);
}

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform labels in [0, order) for a power-of-two order (top bits of each draw).
inline std::vector<std::uint32_t> random_labels(Rng& rng, std::size_t count, std::size_t order) {
  const int bits = std::countr_zero(order);
  std::vector<std::uint32_t> out(count);
  for (auto& v : out) v = bits == 0 ? 0u : static_cast<std::uint32_t>(rng() >> (64 - bits));
  return out;
}

inline std::vector<cplx> random_phases(Rng& rng, std::size_t count) {
  std::vector<cplx> out(count);
  for (auto& v : out) v = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
  return out;
}

/// Circularly symmetric complex Gaussian samples with E|z|^2 = 1.
inline std::vector<cplx> complex_gaussian(Rng& rng, std::size_t count) {
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  std::vector<cplx> out(count);
  for (auto& v : out) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
  return out;
}

}  // namespace trpapr

#endif  // TRPAPR_RANDOM_HPP
