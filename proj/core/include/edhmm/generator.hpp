#pragma once

#include <cstdint>
#include <vector>

#include "edhmm/model.hpp"
#include "edhmm/rng.hpp"

namespace edhmm {

/// Latent path (x_0, d_0), (x_1, d_1) ... (x_T, d_T) with observations.
/// `x` and `d` hold t = 1..T at indices 0..T-1; the initial point is kept
/// separately. `y` may be empty for latent-only paths.
struct Trajectory {
  int x0 = 0;
  int d0 = 1;
  std::vector<int> x;
  std::vector<int> d;
  std::vector<double> y;

  std::size_t length() const { return x.size(); }
  LatentPoint initial() const { return {x0, d0}; }
  LatentPoint at(std::size_t i) const { return {x[i], d[i]}; }
  /// Point preceding index i (the initial point when i == 0).
  LatentPoint before(std::size_t i) const {
    return i == 0 ? initial() : at(i - 1);
  }

  bool operator==(const Trajectory&) const = default;
};

/// Throws SamplerError unless every step of `z` is a legal EDHMM move
/// (countdown within a segment, switch to a different state at a boundary).
void check_structure(const Trajectory& z);

/// Draws one segment duration: 1 + Poisson(lambda).
int sample_duration(double lambda, Rng& rng);

/// Draws (X, D, Y) of length T from the generative model. x_0 is uniform and
/// d_0 = 1, so the first segment starts at t = 1.
Trajectory generate(const ModelParams& params, int T, std::uint64_t seed);
Trajectory generate(const ModelParams& params, int T, Rng& rng);

/// Resamples observations given the latent path.
void sample_observations(Trajectory& z, const ModelParams& params, Rng& rng);

/// log p(X, D, Y | params) including p(x_0) = 1/K. Requires `z.y` to be set.
double log_complete_likelihood(const Trajectory& z, const ModelParams& params);

}  // namespace edhmm
