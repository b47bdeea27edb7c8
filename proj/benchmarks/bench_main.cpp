#include "cbd/analysis.hpp"
#include "cbd/coupling.hpp"
#include "cbd/lp.hpp"
#include "cbd/rng.hpp"
#include "cbd/scenarios.hpp"
#include "cbd/signed_sums.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  cbd::Rng rng(seed);
  std::vector<double> values(n);
  for (double& x : values) {
    x = rng.uniform(-1.0, 1.0);
  }
  return values;
}

void SignedSumClosed(benchmark::State& state) {
  const auto values =
      random_values(static_cast<std::size_t>(state.range()), 11u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbd::s_odd(values));
  }
}
BENCHMARK(SignedSumClosed)->RangeMultiplier(2)->Range(4, 64);

void SignedSumExhaustive(benchmark::State& state) {
  const auto values =
      random_values(static_cast<std::size_t>(state.range()), 12u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cbd::s_parity_exhaustive(values, cbd::Parity::Odd));
  }
}
BENCHMARK(SignedSumExhaustive)->DenseRange(8, 20, 4);

void MaximalCoupling(benchmark::State& state) {
  cbd::Rng rng(13u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cbd::maximal_coupling(rng.uniform01(), rng.uniform01()));
  }
}
BENCHMARK(MaximalCoupling);

void BuildCyclicProgram(benchmark::State& state) {
  const auto sys =
      cbd::random_cyclic(static_cast<int>(state.range()), 14u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cbd::build_cyclic_program(sys, cbd::MinimizeMismatch{}));
  }
}
BENCHMARK(BuildCyclicProgram)->DenseRange(3, 8);

void DeltaMinLp(benchmark::State& state) {
  const auto sys =
      cbd::random_cyclic(static_cast<int>(state.range()), 15u);
  const auto prog = cbd::build_cyclic_program(sys, cbd::MinimizeMismatch{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbd::solve(prog.problem));
  }
}
BENCHMARK(DeltaMinLp)->DenseRange(3, 7);

void AnalyzeFull(benchmark::State& state) {
  const auto sys =
      cbd::random_cyclic(static_cast<int>(state.range()), 16u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbd::analyze(sys));
  }
}
BENCHMARK(AnalyzeFull)->DenseRange(3, 6);

void SpeckerFeasibility(benchmark::State& state) {
  const auto prog =
      cbd::build_generic_program(cbd::specker(), cbd::MaximalConnections{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbd::solve(prog.problem));
  }
}
BENCHMARK(SpeckerFeasibility);

} // namespace

BENCHMARK_MAIN();
