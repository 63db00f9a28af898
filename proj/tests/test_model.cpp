#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "edhmm/error.hpp"
#include "edhmm/model.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace edhmm;

namespace {

using fixtures::experiment1;

// Brute-force set {d in [1, cap] : pmf(d) > thr} as an interval; verifies
// contiguity on the way.
DurationWindow brute_window(double lambda, double thr, int cap) {
  DurationWindow w{1, 0};
  bool seen = false;
  for (int d = 1; d <= cap; ++d) {
    if (oracle::poisson_pmf(d, lambda) > thr) {
      if (!seen) w.lo = d;
      REQUIRE((!seen || w.hi == d - 1));
      w.hi = d;
      seen = true;
    }
  }
  return seen ? w : DurationWindow{};
}

}  // namespace

TEST_CASE("duration pmf: shift origin, interior value, normalization") {
  CHECK(duration_log_pmf(1, 5.0) == doctest::Approx(-5.0).epsilon(1e-15));
  CHECK(std::exp(duration_log_pmf(6, 5.0)) ==
        doctest::Approx(oracle::poisson_pmf(6, 5.0)).epsilon(1e-12));
  CHECK(std::exp(duration_log_pmf(6, 5.0)) == doctest::Approx(0.17546736976785).epsilon(1e-10));

  double total = 0.0;
  for (int d = 1; d <= 200; ++d) total += std::exp(duration_log_pmf(d, 20.0));
  CHECK(std::abs(total - 1.0) < 1e-12);

  CHECK_THROWS_AS(duration_log_pmf(0, 5.0), std::domain_error);
  CHECK_THROWS_AS(duration_log_pmf(3, 0.0), std::domain_error);
  CHECK_THROWS_AS(duration_log_pmf(3, -1.0), std::domain_error);
}

TEST_CASE("duration pmf normalizes at lambda + 20 sqrt(lambda) + 50") {
  for (double lambda : {0.3, 1.0, 5.0, 15.0, 20.0, 137.5, 1000.0}) {
    const int D = static_cast<int>(lambda + 20.0 * std::sqrt(lambda) + 50.0);
    double total = 0.0;
    for (int d = 1; d <= D; ++d) total += std::exp(duration_log_pmf(d, lambda));
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("transition_log_prob cases") {
  const ModelParams p = experiment1();
  CHECK(transition_log_prob({1, 5}, {1, 4}, p) == 0.0);
  CHECK(transition_log_prob({1, 5}, {2, 7}, p) == kNegInf);
  CHECK(transition_log_prob({1, 5}, {1, 3}, p) == kNegInf);
  // a_{1,2} = 0.3 in 1-based notation is A(0, 1) here; lambda_2 = 15.
  CHECK(transition_log_prob({0, 1}, {1, 1}, p) ==
        doctest::Approx(std::log(0.3) - 15.0).epsilon(1e-14));
  for (int x = 0; x < 3; ++x) {
    for (int d = 1; d < 10; ++d) CHECK(transition_log_prob({x, 1}, {x, d}, p) == kNegInf);
  }
}

TEST_CASE("transition probabilities out of a boundary sum to one") {
  const ModelParams p = experiment1();
  const double lmax = 20.0;
  const int D = static_cast<int>(lmax + 20.0 * std::sqrt(lmax) + 50.0);
  for (int x = 0; x < 3; ++x) {
    double total = 0.0;
    for (int xn = 0; xn < 3; ++xn) {
      for (int d = 1; d <= D; ++d) total += std::exp(transition_log_prob({x, 1}, {xn, d}, p));
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
    double cont = 0.0;
    for (int xn = 0; xn < 3; ++xn) {
      for (int d = 1; d <= D; ++d) cont += std::exp(transition_log_prob({x, 7}, {xn, d}, p));
    }
    CHECK(cont == 1.0);
  }
}

TEST_CASE("obs_log_lik") {
  const double c = -0.5 * std::log(2.0 * std::numbers::pi);
  CHECK(obs_log_lik(1.5, {1.5, 1.0}) == doctest::Approx(c).epsilon(1e-15));
  CHECK(obs_log_lik(2.5, {1.5, 1.0}) == doctest::Approx(c - 0.5).epsilon(1e-15));
  CHECK(obs_log_lik(0.0, {-3.0, 1.0}) == doctest::Approx(c - 4.5).epsilon(1e-15));
  CHECK_THROWS_AS(obs_log_lik(0.0, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("duration_slice_window examples") {
  // Brute-force scan gives {5, 6}: pmf(5) = pmf(6) = 0.17547, pmf(7) = 0.14622.
  CHECK(brute_window(5.0, 0.17, 500) == DurationWindow{5, 6});
  CHECK(duration_slice_window(5.0, 0.17, 500) == DurationWindow{5, 6});
  CHECK(duration_slice_window(5.0, 1.0, 500).empty());
  CHECK(duration_slice_window_log(5.0, 0.0, -1e6, 500) == DurationWindow{1, 500});
  CHECK(duration_slice_window(5.0, 1e-300, 10) == DurationWindow{1, 10});
  // Mode beyond the cap: the window ends at the cap.
  const DurationWindow w = duration_slice_window(400.0, 1e-5, 300);
  CHECK(w == brute_window(400.0, 1e-5, 300));
  const DurationWindow far = duration_slice_window_log(1e5, 0.0, -50.0, 500);
  CHECK(far.empty());
}

TEST_CASE("duration_slice_window matches brute force on random inputs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> log_lambda(std::log(0.05), std::log(200.0));
  std::uniform_real_distribution<double> log_thr(std::log(1e-12), std::log(0.9));
  std::uniform_int_distribution<int> cap(1, 400);
  for (int i = 0; i < 1000; ++i) {
    const double lambda = std::exp(log_lambda(rng));
    const double thr = std::exp(log_thr(rng));
    const int c = cap(rng);
    const DurationWindow got = duration_slice_window(lambda, thr, c);
    const DurationWindow want = brute_window(lambda, thr, c);
    // Values within rounding of the threshold may legitimately differ.
    if (!(got == want)) {
      for (int d = 1; d <= c; ++d) {
        if (got.contains(d) != want.contains(d)) {
          CHECK(std::abs(oracle::poisson_pmf(d, lambda) - thr) < 1e-12 * thr);
        }
      }
    }
  }
}

TEST_CASE("validate rejects broken parameters") {
  ModelParams p = experiment1();
  CHECK_NOTHROW(validate(p));
  ModelParams bad = p;
  bad.A(0, 0) = 0.1;
  bad.A(0, 1) = 0.2;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = p;
  bad.A(1, 2) = 0.5;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = p;
  bad.lambda[2] = 0.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = p;
  bad.theta[1].sigma2 = -1.0;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  Priors pr = Priors::defaults_for(3);
  CHECK(pr.dirichlet_mass == 0.5);
  CHECK_NOTHROW(validate(pr));
  pr.niw_nu0 = 1.0;
  CHECK_THROWS_AS(validate(pr), ConfigError);
}
