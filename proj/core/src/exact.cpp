#include "edhmm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edhmm/error.hpp"

namespace edhmm {
namespace {

struct Tables {
  std::vector<double> log_a;     // K x K
  std::vector<double> dur_pmf;   // K x d_max, linear scale
};

Tables make_tables(const ModelParams& params, int d_max) {
  const int K = params.K;
  Tables tb;
  tb.log_a.resize(static_cast<std::size_t>(K) * K);
  tb.dur_pmf.resize(static_cast<std::size_t>(K) * d_max);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const double a = params.A(i, j);
      tb.log_a[i * K + j] = a > 0.0 ? std::log(a) : kNegInf;
    }
    for (int d = 1; d <= d_max; ++d) {
      tb.dur_pmf[static_cast<std::size_t>(i) * d_max + d - 1] =
          std::exp(duration_log_pmf(d, params.lambda[i]));
    }
  }
  return tb;
}

// Emission factors for one step, scaled by the per-step maximum.
std::vector<double> emission_factors(double y, const ModelParams& params) {
  std::vector<double> ll(params.K);
  double best = kNegInf;
  for (int k = 0; k < params.K; ++k) {
    ll[k] = obs_log_lik(y, params.theta[k]);
    best = std::max(best, ll[k]);
  }
  for (double& v : ll) v = std::exp(v - best);
  ll.push_back(best);  // trailing entry carries the log scale
  return ll;
}

void check_args(const ModelParams& params, int d_max) {
  validate(params);
  if (d_max < 1) throw ConfigError("d_max must be >= 1");
}

}  // namespace

std::vector<double> DenseMessage::state_marginal() const {
  std::vector<double> out(K, 0.0);
  for (int x = 0; x < K; ++x) {
    for (int d = 1; d <= d_max; ++d) out[x] += (*this)(x, d);
  }
  return out;
}

ExactForward exact_forward(std::span<const double> y, const ModelParams& params,
                           int d_max) {
  check_args(params, d_max);
  const int K = params.K;
  const std::size_t T = y.size();
  const Tables tb = make_tables(params, d_max);

  ExactForward out;
  out.messages.reserve(T + 1);
  DenseMessage init(K, d_max);
  for (int x = 0; x < K; ++x) init(x, 1) = 1.0 / K;
  out.messages.push_back(std::move(init));
  out.transitions.reserve(T);

  for (std::size_t t = 1; t <= T; ++t) {
    const DenseMessage& prev = out.messages.back();
    DenseMessage next(K, d_max);
    std::size_t pairs = 0;

    for (int x = 0; x < K; ++x) {
      // Segment continuation: (x, d+1) -> (x, d).
      for (int d = 1; d < d_max; ++d) {
        const double w = prev(x, d + 1);
        if (w > 0.0) {
          next(x, d) += w;
          ++pairs;
        }
      }
      // Segment boundary: (x, 1) -> (x', d') for x' != x.
      const double w = prev(x, 1);
      if (w <= 0.0) continue;
      for (int xn = 0; xn < K; ++xn) {
        const double la = tb.log_a[x * K + xn];
        if (la == kNegInf) continue;
        const double wa = w * std::exp(la);
        for (int d = 1; d <= d_max; ++d) {
          const double p = tb.dur_pmf[static_cast<std::size_t>(xn) * d_max + d - 1];
          if (p <= 0.0) continue;
          next(xn, d) += wa * p;
          ++pairs;
        }
      }
    }

    const std::vector<double> em = emission_factors(y[t - 1], params);
    double total = 0.0;
    for (int x = 0; x < K; ++x) {
      for (int d = 1; d <= d_max; ++d) {
        next(x, d) *= em[x];
        total += next(x, d);
      }
    }
    if (!(total > 0.0)) {
      throw SamplerError("forward messages vanished at t=" + std::to_string(t) +
                         " (d_max too small for the data?)");
    }
    for (double& v : next.weights) v /= total;
    out.log_lik += std::log(total) + em[K];
    out.transitions.push_back(pairs);
    out.messages.push_back(std::move(next));
  }
  return out;
}

std::vector<DenseMessage> exact_smoothed_marginals(std::span<const double> y,
                                                   const ModelParams& params,
                                                   int d_max) {
  const ExactForward fwd = exact_forward(y, params, d_max);
  const int K = params.K;
  const std::size_t T = y.size();
  const Tables tb = make_tables(params, d_max);

  // beta[t](z) proportional to p(y_{t+1..T} | z_t = z); rescaled each step.
  DenseMessage beta(K, d_max);
  std::fill(beta.weights.begin(), beta.weights.end(), 1.0);
  std::vector<DenseMessage> marginals(T);

  for (std::size_t t = T; t >= 1; --t) {
    DenseMessage& m = marginals[t - 1];
    m = fwd.messages[t];
    double total = 0.0;
    for (std::size_t i = 0; i < m.weights.size(); ++i) {
      m.weights[i] *= beta.weights[i];
      total += m.weights[i];
    }
    for (double& v : m.weights) v /= total;
    if (t == 1) break;

    // beta_{t-1}(z') = sum_z p(z | z') p(y_t | z) beta_t(z)
    const std::vector<double> em = emission_factors(y[t - 1], params);
    DenseMessage prev(K, d_max);
    std::vector<double> boundary_in(K, 0.0);  // sum_d pmf(d; x) e(x) beta(x, d)
    for (int x = 0; x < K; ++x) {
      for (int d = 1; d <= d_max; ++d) {
        boundary_in[x] += tb.dur_pmf[static_cast<std::size_t>(x) * d_max + d - 1] *
                          em[x] * beta(x, d);
      }
    }
    double scale = 0.0;
    for (int x = 0; x < K; ++x) {
      for (int d = 2; d <= d_max; ++d) prev(x, d) = em[x] * beta(x, d - 1);
      double b = 0.0;
      for (int xn = 0; xn < K; ++xn) {
        const double la = tb.log_a[x * K + xn];
        if (la != kNegInf) b += std::exp(la) * boundary_in[xn];
      }
      prev(x, 1) = b;
      for (int d = 1; d <= d_max; ++d) scale = std::max(scale, prev(x, d));
    }
    if (scale > 0.0) {
      for (double& v : prev.weights) v /= scale;
    }
    beta = std::move(prev);
  }
  return marginals;
}

Trajectory exact_backward_sample(const ExactForward& fwd, std::span<const double> y,
                                 const ModelParams& params, Rng& rng) {
  const int K = params.K;
  const std::size_t T = y.size();
  const int d_max = fwd.messages.front().d_max;
  Trajectory z;
  z.x.resize(T);
  z.d.resize(T);
  z.y.assign(y.begin(), y.end());

  LatentPoint cur{0, 1};
  if (T > 0) {
    const std::size_t idx = sample_categorical(fwd.messages[T].weights, rng);
    cur = {static_cast<int>(idx / d_max), static_cast<int>(idx % d_max) + 1};
    z.x[T - 1] = cur.x;
    z.d[T - 1] = cur.d;
  }
  std::vector<double> w(static_cast<std::size_t>(K) * d_max);
  for (std::size_t t = T; t >= 1; --t) {
    const DenseMessage& prev = fwd.messages[t - 1];
    std::fill(w.begin(), w.end(), 0.0);
    if (cur.d < d_max) w[prev.index(cur.x, cur.d + 1)] = prev(cur.x, cur.d + 1);
    for (int xp = 0; xp < K; ++xp) {
      const double lp = transition_log_prob({xp, 1}, cur, params);
      if (lp != kNegInf) w[prev.index(xp, 1)] = prev(xp, 1) * std::exp(lp);
    }
    const std::size_t idx = sample_categorical(w, rng);
    cur = {static_cast<int>(idx / d_max), static_cast<int>(idx % d_max) + 1};
    if (t >= 2) {
      z.x[t - 2] = cur.x;
      z.d[t - 2] = cur.d;
    }
  }
  z.x0 = cur.x;
  z.d0 = cur.d;
  return z;
}

Trajectory exact_ffbs_sample(std::span<const double> y, const ModelParams& params,
                             int d_max, Rng& rng) {
  const ExactForward fwd = exact_forward(y, params, d_max);
  return exact_backward_sample(fwd, y, params, rng);
}

Trajectory exact_ffbs_sample(std::span<const double> y, const ModelParams& params,
                             int d_max, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return exact_ffbs_sample(y, params, d_max, rng);
}

}  // namespace edhmm
