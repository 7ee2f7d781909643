#include <benchmark/benchmark.h>

#include "hqc/rng.hpp"
#include "hqc/sim_engine.hpp"

namespace {

hqc::Vertex all_ones(std::size_t n) {
  hqc::Vertex v(n);
  for (std::size_t i = 1; i <= n; ++i) v.toggle(i);
  return v;
}

void BM_StepOptimal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto strategy = hqc::Strategy::optimal(n);
  hqc::RngStream rng(1, 0);
  auto s = hqc::make_state(hqc::Vertex(n), all_ones(n));
  for (auto _ : state) {
    if (s.n_unmatched() == 0) s = hqc::make_state(hqc::Vertex(n), all_ones(n));
    benchmark::DoNotOptimize(hqc::step(s, strategy, rng));
  }
}
BENCHMARK(BM_StepOptimal)->Arg(10)->Arg(1024)->Arg(65536);

void BM_StepMaterialized(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto strategy = hqc::Strategy::aldous(n);
  hqc::RngStream rng(2, 0);
  auto s = hqc::make_state(hqc::Vertex(n), all_ones(n));
  for (auto _ : state) {
    if (s.n_unmatched() == 0) s = hqc::make_state(hqc::Vertex(n), all_ones(n));
    const auto q = strategy.q(s);
    benchmark::DoNotOptimize(hqc::step(s, q, rng));
  }
}
BENCHMARK(BM_StepMaterialized)->Arg(10)->Arg(64);

void BM_CouplingBitLevel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto strategy = hqc::Strategy::optimal(n);
  hqc::RngStream rng(3, 0);
  const hqc::Vertex x(n);
  const auto y = all_ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(hqc::run_coupling(x, y, strategy, 1e4, rng));
}
BENCHMARK(BM_CouplingBitLevel)->Arg(10)->Arg(1024);

void BM_ParityChain(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  hqc::RngStream rng(4, 0);
  for (auto _ : state) benchmark::DoNotOptimize(hqc::run_parity_chain(k, rng));
}
BENCHMARK(BM_ParityChain)->Arg(10)->Arg(1024)->Arg(1 << 20);

}  // namespace
