#include <benchmark/benchmark.h>

#include "hqc/analytic.hpp"
#include "hqc/tv_distance.hpp"

namespace {

void BM_Vhat(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hqc::vhat(k, 1.3));
}
BENCHMARK(BM_Vhat)->Arg(11)->Arg(1023)->Arg(65535);

void BM_ParityGap(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hqc::parity_gap(k, 1.3));
}
BENCHMARK(BM_ParityGap)->Arg(11)->Arg(1023);

void BM_Tv(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hqc::tv(k, 1.3));
}
BENCHMARK(BM_Tv)->Arg(11)->Arg(1024)->Arg(65536);

void BM_MaximizeOverLn(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hqc::maximize_over_ln(k, 0.7, k));
}
BENCHMARK(BM_MaximizeOverLn)->Arg(4)->Arg(200);

void BM_LevelCrossing(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hqc::level_crossing(1024, 1024, 0.5));
}
BENCHMARK(BM_LevelCrossing);

}  // namespace

BENCHMARK_MAIN();
