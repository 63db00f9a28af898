#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edhmm/generator.hpp"
#include "edhmm/model.hpp"

namespace edhmm {

/// Normalized weights over the truncated grid x in [0, K), d in [1, d_max].
struct DenseMessage {
  int K = 0;
  int d_max = 0;
  std::vector<double> weights;

  DenseMessage() = default;
  DenseMessage(int k, int dmax)
      : K(k), d_max(dmax), weights(static_cast<std::size_t>(k) * dmax, 0.0) {}

  double& operator()(int x, int d) { return weights[index(x, d)]; }
  double operator()(int x, int d) const { return weights[index(x, d)]; }
  std::size_t index(int x, int d) const {
    return static_cast<std::size_t>(x) * d_max + (d - 1);
  }
  /// Marginal over durations.
  std::vector<double> state_marginal() const;
};

struct ExactForward {
  /// messages[0] is the initial point (x_0 uniform, d_0 = 1); messages[t]
  /// for t = 1..T is proportional to p(z_t, y_1..y_t).
  std::vector<DenseMessage> messages;
  double log_lik = 0.0;
  /// Per step t = 1..T: number of (z_{t-1}, z_t) pairs with non-zero
  /// predecessor weight and non-zero transition probability.
  std::vector<std::size_t> transitions;
};

/// Forward filtering over the flattened (x, d) space with durations capped at
/// d_max. Mass on longer durations is dropped, not renormalized. Throws
/// SamplerError when every weight vanishes at some step.
ExactForward exact_forward(std::span<const double> y, const ModelParams& params,
                           int d_max);

/// p(z_t | y_1..y_T) for t = 1..T (index t-1) under the same truncation.
std::vector<DenseMessage> exact_smoothed_marginals(std::span<const double> y,
                                                   const ModelParams& params,
                                                   int d_max);

/// Forward filtering, backward sampling draw of (x_0, X, D). The returned
/// trajectory carries a copy of `y`.
Trajectory exact_ffbs_sample(std::span<const double> y, const ModelParams& params,
                             int d_max, Rng& rng);
Trajectory exact_ffbs_sample(std::span<const double> y, const ModelParams& params,
                             int d_max, std::uint64_t seed);

/// Backward-sampling half of FFBS, for callers that reuse one forward pass.
Trajectory exact_backward_sample(const ExactForward& fwd, std::span<const double> y,
                                 const ModelParams& params, Rng& rng);

}  // namespace edhmm
