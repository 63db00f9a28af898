#include "edhmm/beam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edhmm/error.hpp"

namespace edhmm {
namespace {

constexpr double kDropBelow = 1e-300;

bool key_less(const SparseEntry& a, const SparseEntry& b) { return a.z < b.z; }

}  // namespace

SliceSequence SliceSequence::constant(std::size_t T, double u) {
  return SliceSequence{std::vector<double>(T, std::log(u))};
}

double SparseMessage::weight(LatentPoint z) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), SparseEntry{z, 0.0},
                             key_less);
  return (it != entries.end() && it->z == z) ? it->weight : 0.0;
}

SliceSequence sample_slices(const Trajectory& z, const ModelParams& params,
                            Rng& rng) {
  SliceSequence out;
  out.log_u.resize(z.length());
  for (std::size_t t = 0; t < z.length(); ++t) {
    const double lp = transition_log_prob(z.before(t), z.at(t), params);
    if (lp == kNegInf || std::isnan(lp)) {
      throw SamplerError("zero-probability transition at t=" + std::to_string(t + 1));
    }
    double lu = lp + std::log(open_unit(rng));
    // The indicator is strict; rounding must not push u onto its bound.
    if (!(lu < lp)) lu = std::nextafter(lp, kNegInf);
    out.log_u[t] = lu;
  }
  return out;
}

BeamForward beam_forward(std::span<const double> y, const SliceSequence& slices,
                         const ModelParams& params, int d_cap) {
  if (slices.size() != y.size()) {
    throw ConfigError("slice sequence length does not match observations");
  }
  if (d_cap < 1) throw ConfigError("d_cap must be >= 1");
  const int K = params.K;
  const std::size_t T = y.size();

  std::vector<double> log_a(static_cast<std::size_t>(K) * K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const double a = params.A(i, j);
      log_a[i * K + j] = a > 0.0 ? std::log(a) : kNegInf;
    }
  }

  BeamForward out;
  out.messages.reserve(T + 1);
  SparseMessage init;
  for (int x = 0; x < K; ++x) init.entries.push_back({{x, 1}, 1.0 / K});
  out.messages.push_back(std::move(init));
  out.trace.transitions.reserve(T);
  out.trace.candidates.reserve(T);
  out.trace.active.reserve(T);

  std::vector<SparseEntry> acc;
  std::vector<double> ll(K);
  for (std::size_t t = 1; t <= T; ++t) {
    const SparseMessage& prev = out.messages.back();
    const double log_u = slices.log_u[t - 1];
    acc.clear();
    std::size_t pairs = 0;
    std::size_t evaluated = 0;

    for (const SparseEntry& e : prev.entries) {
      if (e.z.d > 1) {
        ++evaluated;
        if (log_u < 0.0) {
          acc.push_back({{e.z.x, e.z.d - 1}, e.weight});
          ++pairs;
        }
        continue;
      }
      for (int xn = 0; xn < K; ++xn) {
        const double la = log_a[e.z.x * K + xn];
        if (la == kNegInf) continue;
        const DurationWindow w =
            duration_slice_window_log(params.lambda[xn], la, log_u, d_cap);
        evaluated += w.empty() ? 1
                               : static_cast<std::size_t>(w.size()) + (w.lo > 1) +
                                     (w.hi < d_cap);
        for (int d = w.lo; d <= w.hi; ++d) acc.push_back({{xn, d}, e.weight});
        pairs += static_cast<std::size_t>(w.size());
      }
    }

    std::sort(acc.begin(), acc.end(), key_less);
    SparseMessage next;
    for (const SparseEntry& e : acc) {
      if (!next.entries.empty() && next.entries.back().z == e.z) {
        next.entries.back().weight += e.weight;
      } else {
        next.entries.push_back(e);
      }
    }

    double best = kNegInf;
    for (int k = 0; k < K; ++k) {
      ll[k] = obs_log_lik(y[t - 1], params.theta[k]);
      best = std::max(best, ll[k]);
    }
    for (int k = 0; k < K; ++k) ll[k] = std::exp(ll[k] - best);

    double total = 0.0;
    for (SparseEntry& e : next.entries) {
      e.weight *= ll[e.z.x];
      total += e.weight;
    }
    if (!(total > 0.0)) {
      throw SamplerError("beam forward active set is empty at t=" + std::to_string(t));
    }
    double kept = 0.0;
    std::erase_if(next.entries, [&](SparseEntry& e) {
      e.weight /= total;
      if (e.weight < kDropBelow) return true;
      kept += e.weight;
      return false;
    });
    for (SparseEntry& e : next.entries) e.weight /= kept;

    out.trace.transitions.push_back(pairs);
    out.trace.candidates.push_back(evaluated);
    out.trace.active.push_back(next.entries.size());
    out.messages.push_back(std::move(next));
  }
  return out;
}

Trajectory beam_backward_sample(std::span<const SparseMessage> messages,
                                const SliceSequence& slices,
                                const ModelParams& params, Rng& rng) {
  if (messages.empty()) throw ConfigError("no forward messages");
  const std::size_t T = messages.size() - 1;
  if (slices.size() != T) {
    throw ConfigError("slice sequence length does not match messages");
  }
  const int K = params.K;
  Trajectory z;
  z.x.resize(T);
  z.d.resize(T);

  std::vector<double> w;
  LatentPoint cur{0, 1};
  if (T > 0) {
    const SparseMessage& last = messages[T];
    w.resize(last.size());
    for (std::size_t i = 0; i < last.size(); ++i) w[i] = last.entries[i].weight;
    cur = last.entries[sample_categorical(w, rng)].z;
    z.x[T - 1] = cur.x;
    z.d[T - 1] = cur.d;
  }

  std::vector<LatentPoint> cand;
  for (std::size_t t = T; t >= 1; --t) {
    const SparseMessage& prev = messages[t - 1];
    const double log_u = slices.log_u[t - 1];
    cand.clear();
    w.clear();
    // Continuation predecessor (x, d+1).
    if (log_u < 0.0) {
      const LatentPoint p{cur.x, cur.d + 1};
      const double pw = prev.weight(p);
      if (pw > 0.0) {
        cand.push_back(p);
        w.push_back(pw);
      }
    }
    // Boundary predecessors (x', 1), x' != x; same comparison form as the
    // forward window scan.
    const double log_dur = duration_log_pmf(cur.d, params.lambda[cur.x]);
    for (int xp = 0; xp < K; ++xp) {
      const double a = params.A(xp, cur.x);
      if (a <= 0.0) continue;
      if (!(std::log(a) + log_dur > log_u)) continue;
      const LatentPoint p{xp, 1};
      const double pw = prev.weight(p);
      if (pw > 0.0) {
        cand.push_back(p);
        w.push_back(pw);
      }
    }
    if (cand.empty()) {
      throw SamplerError("no valid predecessor at t=" + std::to_string(t));
    }
    cur = cand[sample_categorical(w, rng)];
    if (t >= 2) {
      z.x[t - 2] = cur.x;
      z.d[t - 2] = cur.d;
    }
  }
  z.x0 = cur.x;
  z.d0 = cur.d;
  return z;
}

}  // namespace edhmm
