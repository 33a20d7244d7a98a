// Serial reference vs OpenMP trial loop on one sweep cell.

#include <benchmark/benchmark.h>

#include "mmo/experiment.hpp"

namespace {

mmo::ExperimentConfig cell(mmo::ExperimentKind kind) {
  mmo::ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.model.sigma_e2 = 0.01;
  cfg.trials = 64;
  return cfg;
}

void run_cell(benchmark::State& state, mmo::ExperimentKind kind, mmo::Exec exec) {
  const mmo::ExperimentConfig cfg = cell(kind);
  const mmo::TrialFn fn = mmo::make_trial(cfg, 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmo::run_trials(fn, cfg.trials, cfg.seed, exec));
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}

void BM_BoundGapSerial(benchmark::State& s) { run_cell(s, mmo::ExperimentKind::BoundGap, mmo::Exec::Serial); }
void BM_BoundGapParallel(benchmark::State& s) { run_cell(s, mmo::ExperimentKind::BoundGap, mmo::Exec::Parallel); }
void BM_SumMseSerial(benchmark::State& s) { run_cell(s, mmo::ExperimentKind::SumMseCompare, mmo::Exec::Serial); }
void BM_SumMseParallel(benchmark::State& s) { run_cell(s, mmo::ExperimentKind::SumMseCompare, mmo::Exec::Parallel); }
void BM_ChainSerial(benchmark::State& s) { run_cell(s, mmo::ExperimentKind::MultiHopCapacity, mmo::Exec::Serial); }
void BM_ChainParallel(benchmark::State& s) { run_cell(s, mmo::ExperimentKind::MultiHopCapacity, mmo::Exec::Parallel); }

}  // namespace

BENCHMARK(BM_BoundGapSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BoundGapParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SumMseSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SumMseParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ChainSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ChainParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
