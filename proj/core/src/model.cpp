#include "edhmm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "edhmm/error.hpp"
#include "edhmm/rng.hpp"

namespace edhmm {

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw SamplerError("categorical draw with non-positive total weight");
  }
  std::uniform_real_distribution<double> unif(0.0, total);
  const double target = unif(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

void validate(const ModelParams& params) {
  const int K = params.K;
  if (K < 2) throw ConfigError("K must be at least 2");
  if (params.A.size() != K) throw ConfigError("A must be K x K");
  if (static_cast<int>(params.lambda.size()) != K) {
    throw ConfigError("lambda must have K entries");
  }
  if (static_cast<int>(params.theta.size()) != K) {
    throw ConfigError("theta must have K entries");
  }
  for (int i = 0; i < K; ++i) {
    if (params.A(i, i) != 0.0) {
      throw ConfigError("A has non-zero diagonal at row " + std::to_string(i));
    }
    double row = 0.0;
    for (int j = 0; j < K; ++j) {
      const double a = params.A(i, j);
      if (!(a >= 0.0) || !std::isfinite(a)) {
        throw ConfigError("A has an invalid entry in row " + std::to_string(i));
      }
      row += a;
    }
    if (std::abs(row - 1.0) > 1e-12) {
      throw ConfigError("row " + std::to_string(i) + " of A does not sum to 1");
    }
    if (!(params.lambda[i] > 0.0) || !std::isfinite(params.lambda[i])) {
      throw ConfigError("lambda must be positive and finite");
    }
    if (!(params.theta[i].sigma2 > 0.0) || !std::isfinite(params.theta[i].sigma2) ||
        !std::isfinite(params.theta[i].mu)) {
      throw ConfigError("theta must have finite mu and positive sigma2");
    }
  }
}

Priors Priors::defaults_for(int K) {
  Priors p;
  p.dirichlet_mass = K > 1 ? 1.0 / (K - 1) : 1.0;
  return p;
}

void validate(const Priors& p) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(p.dirichlet_mass)) throw ConfigError("dirichlet_mass must be > 0");
  if (!positive(p.gamma_shape)) throw ConfigError("gamma_shape must be > 0");
  if (!positive(p.gamma_scale)) throw ConfigError("gamma_scale must be > 0");
  if (!(p.niw_nu0 > 1.0) || !std::isfinite(p.niw_nu0)) {
    throw ConfigError("niw_nu0 must be > 1");
  }
  if (!positive(p.niw_lambda0)) throw ConfigError("niw_lambda0 must be > 0");
  if (!positive(p.niw_kappa0)) throw ConfigError("niw_kappa0 must be > 0");
  if (!std::isfinite(p.niw_mu0)) throw ConfigError("niw_mu0 must be finite");
}

double duration_log_pmf(int d, double lambda) {
  if (d < 1) throw std::domain_error("duration must be >= 1");
  if (!(lambda > 0.0)) throw std::domain_error("duration rate must be > 0");
  const double k = d - 1;
  return -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
}

double transition_log_prob(LatentPoint prev, LatentPoint z,
                           const ModelParams& params) {
  if (prev.d > 1) {
    return (z.x == prev.x && z.d == prev.d - 1) ? 0.0 : kNegInf;
  }
  const double a = params.A(prev.x, z.x);
  if (a <= 0.0) return kNegInf;
  return std::log(a) + duration_log_pmf(z.d, params.lambda[z.x]);
}

double obs_log_lik(double y, const Gaussian& theta) {
  if (!(theta.sigma2 > 0.0)) throw std::domain_error("variance must be > 0");
  const double r = y - theta.mu;
  return -0.5 * std::log(2.0 * std::numbers::pi * theta.sigma2) -
         0.5 * r * r / theta.sigma2;
}

DurationWindow duration_slice_window_log(double lambda, double log_offset,
                                         double log_threshold, int d_cap) {
  if (d_cap < 1) return {};
  auto passes = [&](int d) {
    return log_offset + duration_log_pmf(d, lambda) > log_threshold;
  };
  // floor(lambda) + 1 is a mode; clipping to [1, d_cap] keeps it the
  // maximum over the admissible range because the pmf is unimodal.
  const double raw_mode = std::floor(lambda) + 1.0;
  const int mode = raw_mode >= d_cap ? d_cap : std::max(1, static_cast<int>(raw_mode));
  if (!passes(mode)) return {};
  int lo = mode;
  int hi = mode;
  while (lo > 1 && passes(lo - 1)) --lo;
  while (hi < d_cap && passes(hi + 1)) ++hi;
  return {lo, hi};
}

DurationWindow duration_slice_window(double lambda, double threshold,
                                     int d_cap) {
  if (!(threshold > 0.0)) {
    throw std::domain_error("slice threshold must be > 0");
  }
  return duration_slice_window_log(lambda, 0.0, std::log(threshold), d_cap);
}

}  // namespace edhmm
