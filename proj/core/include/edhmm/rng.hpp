#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace edhmm {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform draw on the open interval (0, 1).
inline double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double v = 0.0;
  while (v == 0.0) v = unif(rng);
  return v;
}

/// Index drawn proportionally to non-negative weights. Weights need not be
/// normalized; their sum must be positive.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

}  // namespace edhmm
