#pragma once

#include <vector>

#include "edhmm/generator.hpp"
#include "edhmm/model.hpp"
#include "edhmm/rng.hpp"

namespace edhmm {

struct Segment {
  int state = 0;
  int duration = 1;  // d at the segment's first index; may exceed the window
  std::size_t start = 0;
  std::size_t observed = 0;  // steps of the segment inside 1..T
};

/// Sufficient statistics of a latent trajectory for the conjugate updates.
struct SegmentStats {
  int K = 0;
  std::vector<Segment> segments;
  /// Boundary transitions between consecutive segments inside the window.
  SquareMatrix<long> transition_counts;
  /// The x_0 -> x_1 transition that opens the first segment.
  int entry_from = 0;
  int entry_to = 0;

  std::vector<long> obs_count;
  std::vector<double> obs_sum;
  std::vector<double> obs_sumsq;

  std::vector<long> segment_count;      // m_k
  std::vector<long> duration_excess;    // sum of (d_i - 1)
};

/// Splits `z` into segments and accumulates counts. Observations are used
/// when `z.y` is populated. Throws SamplerError on structural violations.
SegmentStats extract_segments(const Trajectory& z, int K);

/// Row i ~ Dir(mass + n_{i,j}) over j != i with a_{i,i} = 0. The entry
/// transition x_0 -> x_1 counts as a boundary transition.
SquareMatrix<double> sample_transition_matrix(const SegmentStats& stats,
                                              const Priors& priors, Rng& rng);

/// lambda_k ~ Gamma(shape + sum(d_i - 1), rate = 1/scale + m_k).
std::vector<double> sample_duration_rates(const SegmentStats& stats,
                                          const Priors& priors, Rng& rng);

/// Posterior hyperparameters of the univariate normal-inverse-Wishart.
struct NiwPosterior {
  double mu_n = 0.0;
  double kappa_n = 0.0;
  double nu_n = 0.0;
  double lambda_n = 0.0;
};

NiwPosterior niw_posterior(long n, double sum, double sumsq, const Priors& priors);

/// sigma2_k ~ Lambda_n / chi2(nu_n), then mu_k ~ Normal(mu_n, sigma2_k / kappa_n).
std::vector<Gaussian> sample_obs_params(const SegmentStats& stats,
                                        const Priors& priors, Rng& rng);

/// One blocked conjugate update of all parameters given the trajectory.
ModelParams sample_params(const SegmentStats& stats, const Priors& priors, Rng& rng);

/// Independent draw of every parameter from its prior.
ModelParams sample_params_from_prior(int K, const Priors& priors, Rng& rng);

/// log p(params) under `priors`. For K = 2 the transition matrix is fixed by
/// the zero diagonal and contributes nothing.
double log_prior(const ModelParams& params, const Priors& priors);

}  // namespace edhmm
