#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "edhmm/beam.hpp"
#include "edhmm/chain.hpp"
#include "edhmm/generator.hpp"
#include "edhmm/model.hpp"
#include "edhmm/rng.hpp"

namespace edhmm {

enum class Engine { kBeam, kExact };
enum class InitScheme { kGreedy, kSmallU };

Engine parse_engine(std::string_view s);
InitScheme parse_init(std::string_view s);
std::string_view to_string(Engine e);
std::string_view to_string(InitScheme i);

/// Initial slice value for InitScheme::kSmallU.
inline constexpr double kSmallSlice = 1e-6;

struct SweepOptions {
  /// Duration cap for the beam windows, or d_max for the exact engine.
  int d_cap = 1;
  Engine engine = Engine::kBeam;
  bool resample_params = true;
};

/// Markov chain state of one sampler. `slices` are the auxiliary variables
/// used by the most recent forward pass.
struct SamplerState {
  ModelParams params;
  Trajectory z;
  SliceSequence slices;
  Rng rng;
  long sweep_index = 0;
  SweepDiagnostics diag;
  /// When set, the next sweep uses `slices` as given instead of drawing them
  /// from (z, params). Used by the small-u initialization.
  bool pending_slices = false;
};

/// Builds an initial state from the data. Greedy: place K means at empirical
/// quantiles of y, assign each y_t to the nearest, read durations off run
/// lengths, then draw parameters from their conditional given that path.
/// Small-u: the same parameters, with every slice set to kSmallSlice.
SamplerState initialize(std::span<const double> y, const Priors& priors, int K,
                        std::uint64_t seed, InitScheme init);

/// State with the given parameters and latent path (z.y is ignored).
SamplerState make_state(const ModelParams& params, const Trajectory& z,
                        std::uint64_t seed);

/// One MCMC sweep: slices given (Z, params), forward pass, backward
/// resampling of Z, then conjugate parameter updates given Z.
void sweep(SamplerState& state, std::span<const double> y, const Priors& priors,
           const SweepOptions& options);

struct RunConfig {
  int K = 2;
  long n_burnin = 0;
  long n_samples = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  /// 0 selects the sequence length.
  int d_cap = 0;
  InitScheme init = InitScheme::kGreedy;
  Engine engine = Engine::kBeam;
  /// Attach the latent path to every n-th retained sample (0 = never).
  long latent_every = 0;
};

void validate(const RunConfig& config);

using SweepObserver = std::function<void(const SweepDiagnostics&)>;

/// Burn-in followed by n_samples retained draws, each `thin` sweeps apart.
/// Deterministic for a given seed. `observer` sees every sweep.
std::vector<ChainSample> run(std::span<const double> y, const Priors& priors,
                             const RunConfig& config,
                             const SweepObserver& observer = {});

/// log p(Y, X, D | params) + log p(params).
double log_joint(std::span<const double> y, const Trajectory& z,
                 const ModelParams& params, const Priors& priors);

}  // namespace edhmm
