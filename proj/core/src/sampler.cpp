#include "edhmm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edhmm/error.hpp"
#include "edhmm/exact.hpp"
#include "edhmm/gibbs.hpp"

namespace edhmm {

Engine parse_engine(std::string_view s) {
  if (s == "beam") return Engine::kBeam;
  if (s == "exact") return Engine::kExact;
  throw ConfigError("unknown engine '" + std::string(s) + "' (expected beam|exact)");
}

InitScheme parse_init(std::string_view s) {
  if (s == "greedy") return InitScheme::kGreedy;
  if (s == "small-u") return InitScheme::kSmallU;
  throw ConfigError("unknown init '" + std::string(s) + "' (expected greedy|small-u)");
}

std::string_view to_string(Engine e) { return e == Engine::kBeam ? "beam" : "exact"; }

std::string_view to_string(InitScheme i) {
  return i == InitScheme::kGreedy ? "greedy" : "small-u";
}

namespace {

Trajectory greedy_path(std::span<const double> y, int K) {
  const std::size_t T = y.size();
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> centers(K);
  for (int k = 0; k < K; ++k) {
    const double q = (k + 0.5) / K;
    centers[k] = sorted[std::min(T - 1, static_cast<std::size_t>(q * T))];
  }

  Trajectory z;
  z.x.resize(T);
  z.d.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    int best = 0;
    for (int k = 1; k < K; ++k) {
      if (std::abs(y[t] - centers[k]) < std::abs(y[t] - centers[best])) best = k;
    }
    z.x[t] = best;
  }
  // Durations count down to the end of each maximal run.
  std::size_t start = 0;
  while (start < T) {
    std::size_t end = start;
    while (end + 1 < T && z.x[end + 1] == z.x[start]) ++end;
    for (std::size_t t = start; t <= end; ++t) z.d[t] = static_cast<int>(end - t + 1);
    start = end + 1;
  }
  z.x0 = (z.x[0] + 1) % K;
  z.d0 = 1;
  z.y.assign(y.begin(), y.end());
  return z;
}

}  // namespace

SamplerState initialize(std::span<const double> y, const Priors& priors, int K,
                        std::uint64_t seed, InitScheme init) {
  if (y.empty()) throw ConfigError("observation sequence is empty");
  if (K < 2) throw ConfigError("K must be at least 2");
  validate(priors);
  SamplerState s;
  s.rng = make_rng(seed);
  s.z = greedy_path(y, K);
  s.params = sample_params(extract_segments(s.z, K), priors, s.rng);
  if (init == InitScheme::kSmallU) {
    s.slices = SliceSequence::constant(y.size(), kSmallSlice);
    s.pending_slices = true;
  }
  return s;
}

SamplerState make_state(const ModelParams& params, const Trajectory& z,
                        std::uint64_t seed) {
  validate(params);
  check_structure(z);
  SamplerState s;
  s.params = params;
  s.z = z;
  s.rng = make_rng(seed);
  return s;
}

double log_joint(std::span<const double> y, const Trajectory& z,
                 const ModelParams& params, const Priors& priors) {
  Trajectory with_y = z;
  with_y.y.assign(y.begin(), y.end());
  return log_complete_likelihood(with_y, params) + log_prior(params, priors);
}

void sweep(SamplerState& state, std::span<const double> y, const Priors& priors,
           const SweepOptions& options) {
  const std::size_t T = y.size();
  if (T == 0) throw ConfigError("observation sequence is empty");
  SweepDiagnostics diag;
  diag.sweep = state.sweep_index + 1;

  if (options.engine == Engine::kBeam) {
    // A path with durations beyond the cap cannot be retained by the
    // forward pass; fall back to uniformly small slices for this sweep.
    const bool admissible = std::all_of(state.z.d.begin(), state.z.d.end(),
                                        [&](int d) { return d <= options.d_cap; });
    if (!state.pending_slices && state.z.length() == T && admissible) {
      state.slices = sample_slices(state.z, state.params, state.rng);
    } else if (!state.pending_slices) {
      state.slices = SliceSequence::constant(T, kSmallSlice);
    }
    state.pending_slices = false;
    const BeamForward fwd = beam_forward(y, state.slices, state.params, options.d_cap);
    state.z = beam_backward_sample(fwd.messages, state.slices, state.params, state.rng);
    std::size_t pairs = 0;
    std::size_t cands = 0;
    for (std::size_t t = 0; t < T; ++t) {
      pairs += fwd.trace.transitions[t];
      cands += fwd.trace.candidates[t];
      diag.max_active_set = std::max(diag.max_active_set, fwd.trace.active[t]);
    }
    diag.mean_transitions_per_t = static_cast<double>(pairs) / T;
    diag.mean_candidates_per_t = static_cast<double>(cands) / T;
  } else {
    const ExactForward fwd = exact_forward(y, state.params, options.d_cap);
    state.z = exact_backward_sample(fwd, y, state.params, state.rng);
    std::size_t pairs = 0;
    for (std::size_t t = 1; t <= T; ++t) {
      pairs += fwd.transitions[t - 1];
      const auto& w = fwd.messages[t].weights;
      const auto nz = static_cast<std::size_t>(
          std::count_if(w.begin(), w.end(), [](double v) { return v > 0.0; }));
      diag.max_active_set = std::max(diag.max_active_set, nz);
    }
    diag.mean_transitions_per_t = static_cast<double>(pairs) / T;
    diag.mean_candidates_per_t = diag.mean_transitions_per_t;
  }
  state.z.y.assign(y.begin(), y.end());

  if (options.resample_params) {
    state.params = sample_params(extract_segments(state.z, state.params.K), priors,
                                 state.rng);
  }

  double ll = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    ll += obs_log_lik(y[t], state.params.theta[state.z.x[t]]);
  }
  diag.log_lik = ll;
  diag.log_joint = log_joint(y, state.z, state.params, priors);
  state.diag = diag;
  ++state.sweep_index;
}

void validate(const RunConfig& c) {
  if (c.K < 2) throw ConfigError("K must be >= 2");
  if (c.n_burnin < 0) throw ConfigError("burnin must be >= 0");
  if (c.n_samples < 0) throw ConfigError("samples must be >= 0");
  if (c.thin < 1) throw ConfigError("thin must be >= 1");
  if (c.d_cap < 0) throw ConfigError("d_cap must be >= 1 (or 0 for the sequence length)");
  if (c.latent_every < 0) throw ConfigError("latent_every must be >= 0");
}

std::vector<ChainSample> run(std::span<const double> y, const Priors& priors,
                             const RunConfig& config, const SweepObserver& observer) {
  validate(config);
  if (y.empty()) throw ConfigError("observation sequence is empty");
  SweepOptions opts;
  opts.d_cap = config.d_cap > 0 ? config.d_cap : static_cast<int>(y.size());
  opts.engine = config.engine;

  SamplerState state = initialize(y, priors, config.K, config.seed, config.init);
  std::vector<ChainSample> chain;
  chain.reserve(static_cast<std::size_t>(config.n_samples));
  const long total = config.n_burnin + config.n_samples * config.thin;
  for (long s = 1; s <= total; ++s) {
    try {
      sweep(state, y, priors, opts);
    } catch (const SamplerError& e) {
      throw SamplerError("sweep " + std::to_string(s) + ": " + e.what());
    }
    if (observer) observer(state.diag);
    if (s <= config.n_burnin || (s - config.n_burnin) % config.thin != 0) continue;
    ChainSample sample;
    sample.sweep = s;
    sample.params = state.params;
    sample.log_joint = state.diag.log_joint;
    sample.diag = state.diag;
    const long retained = static_cast<long>(chain.size());
    if (config.latent_every > 0 && retained % config.latent_every == 0) {
      sample.latent = state.z;
    }
    chain.push_back(std::move(sample));
  }
  return chain;
}

}  // namespace edhmm
