#include <benchmark/benchmark.h>

#include "matchfame/cemp.hpp"
#include "matchfame/cycle_measure.hpp"
#include "matchfame/solver.hpp"
#include "matchfame/spectral.hpp"
#include "matchfame/synth.hpp"

namespace {

using namespace matchfame;

SynthInstance Instance(Index n, Index m, double q) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.model = UcmModel{q};
  cfg.seed = 1;
  return generate(cfg);
}

void BM_Compose(benchmark::State& state) {
  const auto m = static_cast<Index>(state.range(0));
  const auto inst = Instance(3, m, 0.0);
  const auto& a = inst.graph.block(0);
  const auto b = transpose(inst.graph.block(0));
  for (auto _ : state) benchmark::DoNotOptimize(compose(a, b));
}
BENCHMARK(BM_Compose)->Arg(20)->Arg(500);

void BM_Inconsistencies(benchmark::State& state) {
  const auto inst = Instance(static_cast<Index>(state.range(0)), 20, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(all_inconsistencies(inst.graph));
}
BENCHMARK(BM_Inconsistencies)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CempPartial(benchmark::State& state) {
  const auto inst = Instance(100, 20, 0.5);
  const auto d = all_inconsistencies(inst.graph);
  CempConfig cfg;
  cfg.exec.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cemp_partial(d, cfg));
}
BENCHMARK(BM_CempPartial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PpmStep(benchmark::State& state) {
  const auto inst = Instance(100, 20, 0.5);
  const SolverConfig cfg;
  const auto s = cemp_partial(inst.graph, CempConfig{});
  const auto w = ppm_weights(s, cfg.gamma);
  const auto p = mst_initialize(inst.graph, s, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_ppm_step(inst.graph, w, p, cfg));
}
BENCHMARK(BM_PpmStep)->Unit(benchmark::kMillisecond);

void BM_MatchFame(benchmark::State& state) {
  const auto inst = Instance(20, static_cast<Index>(state.range(0)), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(match_fame(inst.graph, CempConfig{}, SolverConfig{}));
  }
}
BENCHMARK(BM_MatchFame)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Spectral(benchmark::State& state) {
  const auto inst = Instance(20, static_cast<Index>(state.range(0)), 0.5);
  const Index m_hat = estimate_universe_size(inst.graph, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_baseline(inst.graph, m_hat));
}
BENCHMARK(BM_Spectral)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
