#include <doctest.h>

#include <cmath>

#include "edhmm/error.hpp"
#include "edhmm/exact.hpp"
#include "edhmm/generator.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace edhmm;

TEST_CASE("single step forward matches hand computation") {
  const ModelParams p = fixtures::small_k2();
  const std::vector<double> y = {0.3};
  const int d_max = 4;
  const ExactForward f = exact_forward(y, p, d_max);
  REQUIRE(f.messages.size() == 2);
  // alpha_1(x, d) ∝ (1/K) a_{1-x, x} pmf(d; lambda_x) N(y; theta_x)
  double total = 0.0;
  std::vector<double> want(2 * d_max);
  for (int x = 0; x < 2; ++x) {
    for (int d = 1; d <= d_max; ++d) {
      want[x * d_max + d - 1] = 0.5 * oracle::poisson_pmf(d, p.lambda[x]) *
                                oracle::gauss_pdf(0.3, p.theta[x].mu, p.theta[x].sigma2);
      total += want[x * d_max + d - 1];
    }
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(f.messages[1].weights[i] == doctest::Approx(want[i] / total).epsilon(1e-13));
  }
  CHECK(f.log_lik == doctest::Approx(std::log(total)).epsilon(1e-13));
}

TEST_CASE("forward and smoothing agree with path enumeration") {
  for (const ModelParams& p : {fixtures::small_k2(), fixtures::small_k3()}) {
    const int T = p.K == 2 ? 6 : 5;
    const int d_max = p.K == 2 ? 6 : 4;
    const Trajectory z = generate(p, T, 77);
    const oracle::Enumeration e = oracle::enumerate_paths(z.y, p, d_max);
    const ExactForward f = exact_forward(z.y, p, d_max);
    CHECK(std::abs(f.log_lik - std::log(e.evidence)) < 1e-10);

    const std::vector<DenseMessage> m = exact_smoothed_marginals(z.y, p, d_max);
    REQUIRE(m.size() == static_cast<std::size_t>(T));
    double worst = 0.0;
    for (int t = 0; t < T; ++t) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m[t].weights.size(); ++i) {
        worst = std::max(worst, std::abs(m[t].weights[i] - e.marginals[t][i]));
        sum += m[t].weights[i];
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("uninformative emissions reproduce prior dynamics") {
  // All emissions identical: marginals are the prior over (x, d) paths.
  // T = 3, K = 2, A = [[0,1],[1,0]], lambda = (1, 2), d_max = 3.
  ModelParams p = fixtures::make_params(2, {0, 1, 1, 0}, {1.0, 2.0}, {{0, 1}, {0, 1}});
  const std::vector<double> y = {0.4, -1.0, 2.0};
  const int d_max = 3;
  const std::vector<DenseMessage> m = exact_smoothed_marginals(y, p, d_max);
  // Hand enumeration over the 3-step space; truncated paths are dropped and
  // the remainder renormalized.
  double Z = 0.0;
  std::vector<double> z1(2 * d_max, 0.0);
  std::vector<double> x3(2, 0.0);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int d1 = 1; d1 <= d_max; ++d1) {
      const double w1 = 0.5 * oracle::poisson_pmf(d1, p.lambda[x1]);
      // steps 2 and 3
      for (int d2 = 1; d2 <= d_max; ++d2) {
        const int x2 = d1 > 1 ? x1 : 1 - x1;
        const double w2 = d1 > 1 ? (d2 == d1 - 1 ? 1.0 : 0.0) : oracle::poisson_pmf(d2, p.lambda[x2]);
        if (w2 == 0.0) continue;
        for (int d3 = 1; d3 <= d_max; ++d3) {
          const int xx3 = d2 > 1 ? x2 : 1 - x2;
          const double w3 = d2 > 1 ? (d3 == d2 - 1 ? 1.0 : 0.0) : oracle::poisson_pmf(d3, p.lambda[xx3]);
          if (w3 == 0.0) continue;
          const double w = w1 * w2 * w3;
          Z += w;
          z1[x1 * d_max + d1 - 1] += w;
          x3[xx3] += w;
        }
      }
    }
  }
  for (int i = 0; i < 2 * d_max; ++i) {
    CHECK(m[0].weights[i] == doctest::Approx(z1[i] / Z).epsilon(1e-12));
  }
  const std::vector<double> s3 = m[2].state_marginal();
  CHECK(s3[0] == doctest::Approx(x3[0] / Z).epsilon(1e-12));
  CHECK(s3[1] == doctest::Approx(x3[1] / Z).epsilon(1e-12));
}

TEST_CASE("log-likelihood is non-decreasing in d_max and stabilizes") {
  const ModelParams p = fixtures::small_k2();
  const Trajectory z = generate(p, 40, 3);
  double last = -INFINITY;
  double prev = 0.0;
  for (int d_max = 1; d_max <= 40; ++d_max) {
    double ll = -INFINITY;
    try {
      ll = exact_forward(z.y, p, d_max).log_lik;
    } catch (const SamplerError&) {
      // d_max too small for any path of this length.
    }
    CHECK(ll >= last - 1e-12);
    prev = last;
    last = ll;
  }
  CHECK(std::abs(last - prev) < 1e-10);
}

TEST_CASE("forward is reproducible on the experiment-1 scale") {
  const ModelParams p = fixtures::experiment1();
  const Trajectory z = generate(p, 500, 1);
  const double a = exact_forward(z.y, p, 60).log_lik;
  const double b = exact_forward(z.y, p, 60).log_lik;
  CHECK(std::isfinite(a));
  CHECK(a == b);
}

TEST_CASE("FFBS draws match smoothed marginals") {
  const ModelParams p = fixtures::small_k2();
  const int T = 6, d_max = 6;
  const Trajectory truth = generate(p, T, 11);
  const std::vector<DenseMessage> m = exact_smoothed_marginals(truth.y, p, d_max);
  const ExactForward fwd = exact_forward(truth.y, p, d_max);
  Rng rng = make_rng(5);
  const int n = 50000;
  std::vector<std::vector<double>> counts(T, std::vector<double>(2, 0.0));
  for (int i = 0; i < n; ++i) {
    const Trajectory s = exact_backward_sample(fwd, truth.y, p, rng);
    if (i < 200) REQUIRE_NOTHROW(check_structure(s));
    for (int t = 0; t < T; ++t) counts[t][s.x[t]] += 1.0;
  }
  for (int t = 0; t < T; ++t) {
    const std::vector<double> sm = m[t].state_marginal();
    double tv = 0.0;
    for (int x = 0; x < 2; ++x) tv += 0.5 * std::abs(counts[t][x] / n - sm[x]);
    CHECK(tv < 0.01);
  }
}

TEST_CASE("FFBS is deterministic per seed and respects structure") {
  const ModelParams p = fixtures::experiment1();
  const Trajectory truth = generate(p, 120, 8);
  const Trajectory a = exact_ffbs_sample(truth.y, p, 60, std::uint64_t{99});
  const Trajectory b = exact_ffbs_sample(truth.y, p, 60, std::uint64_t{99});
  CHECK(a == b);
  CHECK_NOTHROW(check_structure(a));
  for (int d : a.d) CHECK(d <= 60);
}

TEST_CASE("vanishing messages are reported") {
  // Every duration up to the cap underflows.
  ModelParams p = fixtures::make_params(2, {0, 1, 1, 0}, {1e5, 1e5}, {{0, 1}, {0, 1}});
  const std::vector<double> y = {0.0};
  CHECK_THROWS_AS(exact_forward(y, p, 3), SamplerError);
  CHECK_THROWS_AS(exact_forward(y, fixtures::small_k2(), 0), ConfigError);
}
