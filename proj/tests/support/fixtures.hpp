#pragma once

#include "edhmm/model.hpp"

namespace fixtures {

inline edhmm::ModelParams make_params(int K, std::initializer_list<double> a,
                                      std::initializer_list<double> lambda,
                                      std::initializer_list<edhmm::Gaussian> theta) {
  edhmm::ModelParams p;
  p.K = K;
  p.A = edhmm::SquareMatrix<double>(K, 0.0);
  auto it = a.begin();
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) p.A(i, j) = *it++;
  p.lambda = lambda;
  p.theta = theta;
  return p;
}

/// Three-state synthetic setup: rates 5/15/20, means -3/0/3, unit variance.
inline edhmm::ModelParams experiment1() {
  return make_params(3, {0, 0.3, 0.7, 0.6, 0, 0.4, 0.3, 0.7, 0}, {5, 15, 20},
                     {{-3, 1}, {0, 1}, {3, 1}});
}

/// Same as experiment1 but with the two low states sharing mean 0.
inline edhmm::ModelParams experiment2() {
  return make_params(3, {0, 0.3, 0.7, 0.6, 0, 0.4, 0.3, 0.7, 0}, {5, 15, 20},
                     {{0, 1}, {0, 1}, {3, 1}});
}

/// Small two-state model for oracle comparisons.
inline edhmm::ModelParams small_k2() {
  return make_params(2, {0, 1, 1, 0}, {2.0, 3.5}, {{-1.0, 1.0}, {1.0, 0.5}});
}

/// Three-state model with overlapping emissions, small rates.
inline edhmm::ModelParams small_k3() {
  return make_params(3, {0, 0.4, 0.6, 0.5, 0, 0.5, 0.7, 0.3, 0}, {1.5, 2.5, 0.8},
                     {{-1.0, 1.0}, {0.5, 1.0}, {1.5, 2.0}});
}

}  // namespace fixtures
