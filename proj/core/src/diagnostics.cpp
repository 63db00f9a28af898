#include "edhmm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edhmm/error.hpp"

namespace edhmm {

double transitions_considered(std::span<const std::size_t> per_step) {
  if (per_step.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t n : per_step) total += static_cast<double>(n);
  return total / static_cast<double>(per_step.size());
}

Relabel parse_relabel(std::string_view s) {
  if (s == "none") return Relabel::kNone;
  if (s == "mu") return Relabel::kByMu;
  if (s == "mu-lambda") return Relabel::kByMuThenLambda;
  throw ConfigError("unknown relabel mode '" + std::string(s) +
                    "' (expected none|mu|mu-lambda)");
}

std::string_view to_string(Relabel r) {
  switch (r) {
    case Relabel::kNone: return "none";
    case Relabel::kByMu: return "mu";
    case Relabel::kByMuThenLambda: return "mu-lambda";
  }
  return "none";
}

std::vector<int> canonical_order(const ModelParams& params, Relabel mode, double mu_tie) {
  std::vector<int> order(params.K);
  std::iota(order.begin(), order.end(), 0);
  if (mode == Relabel::kNone) return order;
  auto mu = [&](int k) { return params.theta[k].mu; };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mu(a) < mu(b); });
  if (mode == Relabel::kByMuThenLambda) {
    std::size_t start = 0;
    while (start < order.size()) {
      std::size_t end = start + 1;
      while (end < order.size() && mu(order[end]) - mu(order[end - 1]) < mu_tie) ++end;
      std::stable_sort(order.begin() + start, order.begin() + end, [&](int a, int b) {
        return params.lambda[a] < params.lambda[b];
      });
      start = end;
    }
  }
  return order;
}

ModelParams permute_states(const ModelParams& params, std::span<const int> order) {
  ModelParams out = params;
  for (int i = 0; i < params.K; ++i) {
    out.lambda[i] = params.lambda[order[i]];
    out.theta[i] = params.theta[order[i]];
    for (int j = 0; j < params.K; ++j) out.A(i, j) = params.A(order[i], order[j]);
  }
  return out;
}

std::vector<ChainSample> relabel_chain(std::span<const ChainSample> chain, Relabel mode,
                                       double mu_tie) {
  std::vector<ChainSample> out(chain.begin(), chain.end());
  if (mode == Relabel::kNone) return out;
  for (ChainSample& s : out) {
    const std::vector<int> order = canonical_order(s.params, mode, mu_tie);
    s.params = permute_states(s.params, order);
    if (s.latent) {
      std::vector<int> inverse(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) inverse[order[i]] = static_cast<int>(i);
      for (int& x : s.latent->x) x = inverse[x];
      s.latent->x0 = inverse[s.latent->x0];
    }
  }
  return out;
}

namespace {

// Linear interpolation between order statistics (type 7).
double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

}  // namespace

ParameterSummary summarize_values(std::string name, std::vector<double> values, int bins) {
  if (values.empty()) throw ConfigError("cannot summarize an empty chain");
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  std::sort(values.begin(), values.end());
  ParameterSummary s;
  s.name = std::move(name);
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.q025 = quantile_sorted(values, 0.025);
  s.q975 = quantile_sorted(values, 0.975);

  const double lo = values.front();
  const double hi = values.back();
  Histogram& h = s.histogram;
  if (hi == lo) {
    h.edges = {lo, hi};
    h.counts = {static_cast<long>(values.size())};
    return s;
  }
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * b / bins;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<int>((v - lo) / (hi - lo) * bins);
    h.counts[std::clamp(b, 0, bins - 1)] += 1;
  }
  return s;
}

PosteriorSummary summarize_posterior(std::span<const ChainSample> chain, int bins) {
  if (chain.empty()) throw ConfigError("cannot summarize an empty chain");
  const int K = chain.front().params.K;
  PosteriorSummary out;
  out.n_samples = chain.size();
  auto collect = [&](auto get) {
    std::vector<double> v;
    v.reserve(chain.size());
    for (const ChainSample& s : chain) {
      if (s.params.K != K) throw ConfigError("chain mixes different K");
      v.push_back(get(s.params));
    }
    return v;
  };
  for (int k = 0; k < K; ++k) {
    out.parameters.push_back(summarize_values(
        "mu[" + std::to_string(k) + "]", collect([k](const ModelParams& p) { return p.theta[k].mu; }),
        bins));
  }
  for (int k = 0; k < K; ++k) {
    out.parameters.push_back(summarize_values(
        "sigma2[" + std::to_string(k) + "]",
        collect([k](const ModelParams& p) { return p.theta[k].sigma2; }), bins));
  }
  for (int k = 0; k < K; ++k) {
    out.parameters.push_back(summarize_values(
        "lambda[" + std::to_string(k) + "]",
        collect([k](const ModelParams& p) { return p.lambda[k]; }), bins));
  }
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      if (i == j) continue;
      out.parameters.push_back(summarize_values(
          "A[" + std::to_string(i) + "][" + std::to_string(j) + "]",
          collect([i, j](const ModelParams& p) { return p.A(i, j); }), bins));
    }
  }
  return out;
}

const ParameterSummary& PosteriorSummary::at(std::string_view name) const {
  for (const ParameterSummary& p : parameters) {
    if (p.name == name) return p;
  }
  throw ConfigError("no summary for parameter '" + std::string(name) + "'");
}

}  // namespace edhmm
