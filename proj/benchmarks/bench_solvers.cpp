#include <benchmark/benchmark.h>

#include "ggmlab/baselines.hpp"
#include "ggmlab/dilat.hpp"
#include "ggmlab/evaluation.hpp"

namespace {

using namespace ggmlab;

// Grid graph with side `side`, V1 = roughly 60% of the vertices.
RunData instance(int side) {
  ExperimentConfig cfg;
  cfg.graph = GraphSpec::grid(side, side);
  cfg.n1 = side * side * 3 / 5;
  cfg.m = 500;
  cfg.master_seed = 42;
  return prepare_run(cfg, 0);
}

void BM_Glasso(benchmark::State& state) {
  const RunData d = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(glasso_fit(d.samples.sigma1_hat, 0.07));
  }
  state.SetLabel("n1=" + std::to_string(d.partition.n1()));
}
BENCHMARK(BM_Glasso)->DenseRange(5, 9, 2)->Unit(benchmark::kMillisecond);

void BM_Lvggm(benchmark::State& state) {
  const RunData d = instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvggm_fit(d.samples.sigma1_hat, 0.07, 1.0));
  }
  state.SetLabel("n1=" + std::to_string(d.partition.n1()));
}
BENCHMARK(BM_Lvggm)->DenseRange(5, 9, 2)->Unit(benchmark::kMillisecond);

void BM_DilatFit(benchmark::State& state) {
  const RunData d = instance(static_cast<int>(state.range(0)));
  const ExternalSummary summary = run_summary(d, 0.1);
  const DilatProblem prob(d.samples.sigma1_hat, summary.theta2_hat, 0.07, 0.1);
  DilatOptions opts;
  opts.inner.adaptive_rho = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(dilat_fit(prob, opts));
  state.SetLabel("n1=" + std::to_string(prob.n1()) + (opts.inner.adaptive_rho ? " adaptive" : ""));
}
BENCHMARK(BM_DilatFit)
    ->ArgsProduct({{5, 7}, {0, 1}})
    ->Unit(benchmark::kMillisecond)
    ->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
