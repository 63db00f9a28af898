#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edhmm/generator.hpp"
#include "edhmm/model.hpp"
#include "edhmm/rng.hpp"

namespace edhmm {

/// Auxiliary slice variables u_1..u_T, stored as log u_t so that thresholds
/// below the smallest double (e.g. under a very large duration rate) remain
/// representable.
struct SliceSequence {
  std::vector<double> log_u;

  std::size_t size() const { return log_u.size(); }
  /// Every slice set to the same value, e.g. for a near-exhaustive pass.
  static SliceSequence constant(std::size_t T, double u);
};

/// One active entry of a sparse forward message.
struct SparseEntry {
  LatentPoint z;
  double weight = 0.0;
};

/// Forward message restricted to the active set. Entries are sorted by
/// (x, d), strictly positive and sum to one.
struct SparseMessage {
  std::vector<SparseEntry> entries;

  std::size_t size() const { return entries.size(); }
  /// Weight of `z`, or 0 if inactive.
  double weight(LatentPoint z) const;
  bool contains(LatentPoint z) const { return weight(z) > 0.0; }
};

/// Per-step bookkeeping of one forward pass, t = 1..T.
struct ForwardTrace {
  /// (z_{t-1}, z_t) pairs whose slice indicator passed.
  std::vector<std::size_t> transitions;
  /// Transition probabilities evaluated while enumerating successors,
  /// including the failing probes that end each duration window scan.
  std::vector<std::size_t> candidates;
  /// Active-set size after pruning.
  std::vector<std::size_t> active;
};

struct BeamForward {
  /// messages[0] is the initial point (x_0 uniform, d_0 = 1).
  std::vector<SparseMessage> messages;
  ForwardTrace trace;
};

/// Draws u_t ~ Uniform(0, p(z_t | z_{t-1})) along `z`. Throws SamplerError if
/// any step of `z` has zero probability under `params`.
SliceSequence sample_slices(const Trajectory& z, const ModelParams& params, Rng& rng);

/// Slice-restricted forward pass:
///   alpha_t(z) ∝ p(y_t | z) * sum_{z'} I(u_t < p(z | z')) alpha_{t-1}(z').
/// Durations are capped at d_cap. Normalized weights below 1e-300 are
/// dropped. Throws SamplerError if the active set becomes empty.
BeamForward beam_forward(std::span<const double> y, const SliceSequence& slices,
                         const ModelParams& params, int d_cap);

/// Backward sampling through the sparse messages:
///   z_T ~ alpha_T,  z_{t-1} ∝ I(u_t < p(z_t | z_{t-1})) alpha_{t-1}(z_{t-1}).
/// The returned trajectory carries no observations.
Trajectory beam_backward_sample(std::span<const SparseMessage> messages,
                                const SliceSequence& slices,
                                const ModelParams& params, Rng& rng);

}  // namespace edhmm
