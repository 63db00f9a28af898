#include <benchmark/benchmark.h>

#include "edhmm/beam.hpp"
#include "edhmm/exact.hpp"
#include "edhmm/generator.hpp"
#include "edhmm/sampler.hpp"

using namespace edhmm;

namespace {

ModelParams three_state() {
  ModelParams p;
  p.K = 3;
  p.A = SquareMatrix<double>(3, 0.0);
  const double a[3][3] = {{0, 0.3, 0.7}, {0.6, 0, 0.4}, {0.3, 0.7, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p.A(i, j) = a[i][j];
  p.lambda = {5, 15, 20};
  p.theta = {{-3, 1}, {0, 1}, {3, 1}};
  return p;
}

void BM_BeamForward(benchmark::State& state) {
  const ModelParams p = three_state();
  const int T = static_cast<int>(state.range(0));
  const Trajectory z = generate(p, T, 1);
  Rng rng = make_rng(2);
  const SliceSequence u = sample_slices(z, p, rng);
  std::size_t transitions = 0;
  for (auto _ : state) {
    const BeamForward f = beam_forward(z.y, u, p, T);
    transitions = 0;
    for (std::size_t n : f.trace.transitions) transitions += n;
    benchmark::DoNotOptimize(f.messages.data());
  }
  state.counters["transitions_per_t"] = static_cast<double>(transitions) / T;
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_BeamForward)->Arg(500)->Arg(2000)->Arg(8000);

void BM_ExactForward(benchmark::State& state) {
  const ModelParams p = three_state();
  const int T = static_cast<int>(state.range(0));
  const Trajectory z = generate(p, T, 1);
  for (auto _ : state) {
    const ExactForward f = exact_forward(z.y, p, T);
    benchmark::DoNotOptimize(f.log_lik);
  }
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_ExactForward)->Arg(500)->Arg(2000);

void BM_Sweep(benchmark::State& state) {
  const ModelParams p = three_state();
  const int T = static_cast<int>(state.range(0));
  const Trajectory z = generate(p, T, 1);
  SamplerState s = make_state(p, z, 3);
  const Priors priors = Priors::defaults_for(3);
  SweepOptions opts;
  opts.d_cap = T;
  for (auto _ : state) sweep(s, z.y, priors, opts);
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_Sweep)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
