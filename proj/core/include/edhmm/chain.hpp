#pragma once

#include <optional>
#include <vector>

#include "edhmm/generator.hpp"
#include "edhmm/model.hpp"

namespace edhmm {

/// Per-sweep efficiency counters.
struct SweepDiagnostics {
  long sweep = 0;
  double mean_transitions_per_t = 0.0;
  double mean_candidates_per_t = 0.0;
  std::size_t max_active_set = 0;
  /// sum_t log p(y_t | x_t) under the sweep's final parameters.
  double log_lik = 0.0;
  /// log p(Y, X, D, params).
  double log_joint = 0.0;
};

/// One retained posterior draw.
struct ChainSample {
  long sweep = 0;
  ModelParams params;
  double log_joint = 0.0;
  SweepDiagnostics diag;
  std::optional<Trajectory> latent;
};

}  // namespace edhmm
