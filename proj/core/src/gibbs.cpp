#include "edhmm/gibbs.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "edhmm/error.hpp"

namespace edhmm {
namespace {

double draw_gamma(double shape, double scale, Rng& rng) {
  std::gamma_distribution<double> g(shape, scale);
  return g(rng);
}

}  // namespace

SegmentStats extract_segments(const Trajectory& z, int K) {
  check_structure(z);
  SegmentStats s;
  s.K = K;
  s.transition_counts = SquareMatrix<long>(K, 0);
  s.obs_count.assign(K, 0);
  s.obs_sum.assign(K, 0.0);
  s.obs_sumsq.assign(K, 0.0);
  s.segment_count.assign(K, 0);
  s.duration_excess.assign(K, 0);

  const bool has_y = z.y.size() == z.length();
  const std::size_t T = z.length();
  for (std::size_t t = 0; t < T; ++t) {
    const int x = z.x[t];
    if (x < 0 || x >= K) throw SamplerError("state index out of range");
    if (z.before(t).d == 1) {
      if (t == 0) {
        s.entry_from = z.x0;
        s.entry_to = x;
      } else {
        s.transition_counts(z.x[t - 1], x) += 1;
      }
      s.segments.push_back({x, z.d[t], t, 0});
      s.segment_count[x] += 1;
      s.duration_excess[x] += z.d[t] - 1;
    }
    s.segments.back().observed += 1;
    if (has_y) {
      s.obs_count[x] += 1;
      s.obs_sum[x] += z.y[t];
      s.obs_sumsq[x] += z.y[t] * z.y[t];
    }
  }
  return s;
}

SquareMatrix<double> sample_transition_matrix(const SegmentStats& stats,
                                              const Priors& priors, Rng& rng) {
  const int K = stats.K;
  SquareMatrix<double> A(K, 0.0);
  for (int i = 0; i < K; ++i) {
    double total = 0.0;
    for (int j = 0; j < K; ++j) {
      if (j == i) continue;
      double alpha = priors.dirichlet_mass + static_cast<double>(stats.transition_counts(i, j));
      if (i == stats.entry_from && j == stats.entry_to && !stats.segments.empty()) {
        alpha += 1.0;
      }
      A(i, j) = draw_gamma(alpha, 1.0, rng);
      total += A(i, j);
    }
    if (!(total > 0.0)) {
      // All gamma draws underflowed (tiny concentrations); fall back to a
      // single categorical pick, the limit of the Dirichlet.
      std::vector<double> mass(K);
      for (int j = 0; j < K; ++j) mass[j] = j == i ? 0.0 : 1.0;
      const auto pick = static_cast<int>(sample_categorical(mass, rng));
      A(i, pick) = 1.0;
      continue;
    }
    for (int j = 0; j < K; ++j) A(i, j) /= total;
  }
  return A;
}

std::vector<double> sample_duration_rates(const SegmentStats& stats,
                                          const Priors& priors, Rng& rng) {
  std::vector<double> lambda(stats.K);
  for (int k = 0; k < stats.K; ++k) {
    const double shape = priors.gamma_shape + static_cast<double>(stats.duration_excess[k]);
    const double rate = 1.0 / priors.gamma_scale + static_cast<double>(stats.segment_count[k]);
    double v = draw_gamma(shape, 1.0 / rate, rng);
    if (!(v > 0.0)) v = std::numeric_limits<double>::min();
    lambda[k] = v;
  }
  return lambda;
}

NiwPosterior niw_posterior(long n, double sum, double sumsq, const Priors& priors) {
  NiwPosterior p;
  const double nd = static_cast<double>(n);
  p.kappa_n = priors.niw_kappa0 + nd;
  p.nu_n = priors.niw_nu0 + nd;
  if (n == 0) {
    p.mu_n = priors.niw_mu0;
    p.lambda_n = priors.niw_lambda0;
    return p;
  }
  const double mean = sum / nd;
  const double scatter = std::max(0.0, sumsq - nd * mean * mean);
  const double dev = mean - priors.niw_mu0;
  p.mu_n = (priors.niw_kappa0 * priors.niw_mu0 + sum) / p.kappa_n;
  p.lambda_n = priors.niw_lambda0 + scatter + priors.niw_kappa0 * nd * dev * dev / p.kappa_n;
  return p;
}

std::vector<Gaussian> sample_obs_params(const SegmentStats& stats,
                                        const Priors& priors, Rng& rng) {
  std::vector<Gaussian> theta(stats.K);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < stats.K; ++k) {
    const NiwPosterior p =
        niw_posterior(stats.obs_count[k], stats.obs_sum[k], stats.obs_sumsq[k], priors);
    std::chi_squared_distribution<double> chi2(p.nu_n);
    double chi = chi2(rng);
    if (!(chi > 0.0)) chi = std::numeric_limits<double>::min();
    const double sigma2 = p.lambda_n / chi;
    theta[k].sigma2 = sigma2;
    theta[k].mu = p.mu_n + std::sqrt(sigma2 / p.kappa_n) * normal(rng);
  }
  return theta;
}

ModelParams sample_params(const SegmentStats& stats, const Priors& priors, Rng& rng) {
  ModelParams p;
  p.K = stats.K;
  p.A = sample_transition_matrix(stats, priors, rng);
  p.lambda = sample_duration_rates(stats, priors, rng);
  p.theta = sample_obs_params(stats, priors, rng);
  return p;
}

ModelParams sample_params_from_prior(int K, const Priors& priors, Rng& rng) {
  SegmentStats empty;
  empty.K = K;
  empty.transition_counts = SquareMatrix<long>(K, 0);
  empty.obs_count.assign(K, 0);
  empty.obs_sum.assign(K, 0.0);
  empty.obs_sumsq.assign(K, 0.0);
  empty.segment_count.assign(K, 0);
  empty.duration_excess.assign(K, 0);
  return sample_params(empty, priors, rng);
}

double log_prior(const ModelParams& params, const Priors& priors) {
  const int K = params.K;
  double lp = 0.0;
  if (K > 2) {
    const double a = priors.dirichlet_mass;
    const double m = K - 1;
    for (int i = 0; i < K; ++i) {
      lp += std::lgamma(a * m) - m * std::lgamma(a);
      for (int j = 0; j < K; ++j) {
        if (j != i) lp += (a - 1.0) * std::log(params.A(i, j));
      }
    }
  }
  const double shape = priors.gamma_shape;
  const double scale = priors.gamma_scale;
  for (double l : params.lambda) {
    lp += -std::lgamma(shape) - shape * std::log(scale) + (shape - 1.0) * std::log(l) -
          l / scale;
  }
  // sigma2 ~ InvGamma(nu0/2, Lambda0/2); mu | sigma2 ~ N(mu0, sigma2/kappa0).
  const double h = 0.5 * priors.niw_nu0;
  const double b = 0.5 * priors.niw_lambda0;
  for (const Gaussian& g : params.theta) {
    lp += h * std::log(b) - std::lgamma(h) - (h + 1.0) * std::log(g.sigma2) - b / g.sigma2;
    lp += obs_log_lik(g.mu, {priors.niw_mu0, g.sigma2 / priors.niw_kappa0});
  }
  return lp;
}

}  // namespace edhmm
