#include <benchmark/benchmark.h>

#include <vector>

#include <spolight/analysis.hpp>
#include <spolight/simulator.hpp>

namespace {

using namespace spolight;

void BM_SimulateSource(benchmark::State& state) {
  const double duration = static_cast<double>(state.range(0)) * 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(sim::simulate_source(2e5, duration, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2e5 * duration));
}
BENCHMARK(BM_SimulateSource)->Arg(10)->Arg(100);

void BM_ExperimentChunk(benchmark::State& state) {
  sim::SimConfig cfg;
  cfg.duration_s = 3600.0;  // effectively unbounded source of chunks
  cfg.dead_time_ns = 63.5;
  sim::ExperimentStream stream(cfg);
  BinnedCountStream chunk;
  for (auto _ : state) {
    stream.next(chunk, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(chunk);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExperimentChunk)->Arg(1 << 20)->Arg(4 << 20);

void BM_CorrelationDense(benchmark::State& state) {
  sim::SimConfig cfg;
  cfg.duration_s = 0.01;
  cfg.seed = 3;
  const BinnedCountStream s = sim::run_experiment(cfg);
  std::vector<std::size_t> delays;
  for (std::size_t d = 0; d <= static_cast<std::size_t>(state.range(0)); ++d)
    delays.push_back(d);
  for (auto _ : state)
    benchmark::DoNotOptimize(analysis::correlation(s, delays, analysis::Mode::cross_correlation));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.bins()));
}
BENCHMARK(BM_CorrelationDense)->Arg(8)->Arg(80);

void BM_AccumulatorAdd(benchmark::State& state) {
  sim::SimConfig cfg;
  cfg.duration_s = 0.01;
  cfg.seed = 5;
  const BinnedCountStream s = sim::run_experiment(cfg);
  std::vector<std::size_t> delays;
  for (std::size_t d = 0; d <= 80; ++d) delays.push_back(d);
  for (auto _ : state) {
    analysis::CorrelationAccumulator acc(delays, analysis::Mode::cross_correlation);
    acc.add(s);
    benchmark::DoNotOptimize(acc.result());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.bins()));
}
BENCHMARK(BM_AccumulatorAdd);

void BM_RunSplit(benchmark::State& state) {
  sim::SimConfig cfg;
  cfg.duration_s = 0.02;
  cfg.bin_width_ns = 125.0;
  cfg.seed = 11;
  const BinnedCountStream s = sim::run_experiment(cfg);
  std::vector<std::size_t> delays;
  for (std::size_t d = 0; d <= 20; ++d) delays.push_back(d);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        analysis::run_split(s, 10, delays, analysis::Mode::cross_correlation));
}
BENCHMARK(BM_RunSplit);

}  // namespace

BENCHMARK_MAIN();
