#pragma once

#include <cstddef>
#include <compare>
#include <limits>
#include <vector>

namespace edhmm {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Dense row-major K x K matrix used for transition probabilities and
/// transition counts.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, T fill = T{})
      : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

  int size() const { return n_; }
  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  int n_ = 0;
  std::vector<T> data_;
};

/// Gaussian observation parameters of one state.
struct Gaussian {
  double mu = 0.0;
  double sigma2 = 1.0;
  bool operator==(const Gaussian&) const = default;
};

/// Full EDHMM parameter set: zero-diagonal transition matrix, shifted-Poisson
/// duration rates and univariate Gaussian emissions. States are 0-based.
struct ModelParams {
  int K = 0;
  SquareMatrix<double> A;
  std::vector<double> lambda;
  std::vector<Gaussian> theta;

  bool operator==(const ModelParams&) const = default;
};

/// Throws ConfigError if any structural invariant of `params` is violated:
/// rows of A sum to 1 within 1e-12, exact-zero diagonal, positive rates and
/// variances.
void validate(const ModelParams& params);

/// Latent tuple z_t = (state, remaining duration). d >= 1.
struct LatentPoint {
  int x = 0;
  int d = 1;
  auto operator<=>(const LatentPoint&) const = default;
};

/// Conjugate priors. Dirichlet mass applies to every off-diagonal cell,
/// Gamma is shape/scale, and the observation prior is the univariate
/// normal-inverse-Wishart (nu0, Lambda0, kappa0, mu0).
struct Priors {
  double dirichlet_mass = 0.5;
  double gamma_shape = 1.0;
  double gamma_scale = 1e5;
  double niw_nu0 = 2.0;
  double niw_lambda0 = 1.0;
  double niw_kappa0 = 0.1;
  double niw_mu0 = 0.0;

  bool operator==(const Priors&) const = default;

  /// Broad priors used for the synthetic experiments, with the Dirichlet
  /// mass set to 1/(K-1).
  static Priors defaults_for(int K);
};

void validate(const Priors& priors);

/// log p(d | lambda) for the shifted Poisson, d - 1 ~ Poisson(lambda).
/// Throws std::domain_error for d < 1 or lambda <= 0.
double duration_log_pmf(int d, double lambda);

/// log p(z | z_prev): deterministic countdown while z_prev.d > 1, otherwise
/// log a_{x_prev, x} + duration_log_pmf(z.d, lambda_x).
double transition_log_prob(LatentPoint prev, LatentPoint z,
                           const ModelParams& params);

/// Univariate Gaussian log density. Throws std::domain_error on sigma2 <= 0.
double obs_log_lik(double y, const Gaussian& theta);

/// Closed integer interval; empty when hi < lo.
struct DurationWindow {
  int lo = 1;
  int hi = 0;

  bool empty() const { return hi < lo; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(int d) const { return d >= lo && d <= hi; }
  bool operator==(const DurationWindow&) const = default;
};

/// {d in [1, d_cap] : pmf(d; lambda) > threshold}. The shifted Poisson is
/// unimodal, so the set is contiguous and is found by scanning outward from
/// the mode floor(lambda) + 1.
DurationWindow duration_slice_window(double lambda, double threshold,
                                     int d_cap);

/// {d in [1, d_cap] : log_offset + log pmf(d; lambda) > log_threshold}.
/// The comparison is evaluated in exactly the form used by the beam sampler's
/// indicator (log a + log pmf > log u) so forward and backward passes agree
/// bit-for-bit on which transitions are admitted.
DurationWindow duration_slice_window_log(double lambda, double log_offset,
                                         double log_threshold, int d_cap);

}  // namespace edhmm
