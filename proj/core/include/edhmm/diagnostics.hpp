#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edhmm/chain.hpp"
#include "edhmm/model.hpp"

namespace edhmm {

/// Mean over t of the per-step counts of admitted (z_{t-1}, z_t) pairs.
double transitions_considered(std::span<const std::size_t> per_step);

enum class Relabel {
  kNone,
  /// Sort states by mu within every sample.
  kByMu,
  /// Sort by mu, then order states whose mu values lie within `mu_tie` of
  /// their neighbour by lambda.
  kByMuThenLambda,
};

Relabel parse_relabel(std::string_view s);
std::string_view to_string(Relabel r);

/// Permutation `order` with order[new_label] = old_label for one sample.
std::vector<int> canonical_order(const ModelParams& params, Relabel mode,
                                 double mu_tie = 0.5);

/// Applies a permutation (order[new] = old) to every parameter, including
/// the rows and columns of A.
ModelParams permute_states(const ModelParams& params, std::span<const int> order);

std::vector<ChainSample> relabel_chain(std::span<const ChainSample> chain, Relabel mode,
                                       double mu_tie = 0.5);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<long> counts;
};

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  Histogram histogram;
};

struct PosteriorSummary {
  std::size_t n_samples = 0;
  std::vector<ParameterSummary> parameters;

  const ParameterSummary& at(std::string_view name) const;
};

/// Summary of a scalar sample. Computed from the sorted values so the result
/// does not depend on input order. Throws ConfigError when empty.
ParameterSummary summarize_values(std::string name, std::vector<double> values,
                                  int bins = 30);

/// Summaries of mu, sigma2, lambda and the off-diagonal of A. Throws
/// ConfigError on an empty chain.
PosteriorSummary summarize_posterior(std::span<const ChainSample> chain, int bins = 30);

}  // namespace edhmm
