#include "edhmm/generator.hpp"

#include <cmath>
#include <string>

#include "edhmm/error.hpp"

namespace edhmm {

void check_structure(const Trajectory& z) {
  if (z.d.size() != z.x.size()) {
    throw SamplerError("trajectory state and duration lengths differ");
  }
  if (z.d0 < 1) throw SamplerError("initial duration must be >= 1");
  for (std::size_t i = 0; i < z.length(); ++i) {
    const LatentPoint prev = z.before(i);
    const LatentPoint cur = z.at(i);
    const bool ok = prev.d > 1 ? (cur.x == prev.x && cur.d == prev.d - 1)
                               : (cur.x != prev.x && cur.d >= 1);
    if (!ok) {
      throw SamplerError("illegal latent move at t=" + std::to_string(i + 1));
    }
  }
}

int sample_duration(double lambda, Rng& rng) {
  std::poisson_distribution<int> pois(lambda);
  return 1 + pois(rng);
}

Trajectory generate(const ModelParams& params, int T, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return generate(params, T, rng);
}

Trajectory generate(const ModelParams& params, int T, Rng& rng) {
  if (T < 1) throw ConfigError("T must be >= 1");
  validate(params);
  const int K = params.K;
  Trajectory z;
  z.x.resize(T);
  z.d.resize(T);
  std::uniform_int_distribution<int> initial(0, K - 1);
  z.x0 = initial(rng);
  z.d0 = 1;

  std::vector<double> row(K);
  LatentPoint prev = z.initial();
  for (int t = 0; t < T; ++t) {
    LatentPoint cur;
    if (prev.d == 1) {
      for (int j = 0; j < K; ++j) row[j] = params.A(prev.x, j);
      cur.x = static_cast<int>(sample_categorical(row, rng));
      cur.d = sample_duration(params.lambda[cur.x], rng);
    } else {
      cur = {prev.x, prev.d - 1};
    }
    z.x[t] = cur.x;
    z.d[t] = cur.d;
    prev = cur;
  }
  sample_observations(z, params, rng);
  return z;
}

void sample_observations(Trajectory& z, const ModelParams& params, Rng& rng) {
  z.y.resize(z.length());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t t = 0; t < z.length(); ++t) {
    const Gaussian& g = params.theta[z.x[t]];
    z.y[t] = g.mu + std::sqrt(g.sigma2) * normal(rng);
  }
}

double log_complete_likelihood(const Trajectory& z, const ModelParams& params) {
  if (z.y.size() != z.length()) {
    throw ConfigError("trajectory has no observations");
  }
  double lp = -std::log(static_cast<double>(params.K));
  for (std::size_t t = 0; t < z.length(); ++t) {
    lp += transition_log_prob(z.before(t), z.at(t), params);
    lp += obs_log_lik(z.y[t], params.theta[z.x[t]]);
  }
  return lp;
}

}  // namespace edhmm
