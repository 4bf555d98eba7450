// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "maxjsr/jsr.hpp"
#include "maxjsr/oracles.hpp"
#include "maxjsr/regularity.hpp"

namespace {

using maxjsr::Execution;

maxjsr::MaxMatrix random_square(std::size_t n) {
  std::mt19937_64 rng(7);
  return maxjsr::oracles::random_matrix(n, 1.0, 0.1, 10.0, rng);
}

template <Execution E>
void BM_MaxMul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_square(n);
  const auto b = random_square(n);
  for (auto _ : state) benchmark::DoNotOptimize(maxjsr::max_mul(a, b, E));
  state.SetComplexityN(state.range(0));
}

template <Execution E>
void BM_ProductExtrema(benchmark::State& state) {
  maxjsr::oracles::InstanceSpec spec;
  spec.n = 8;
  spec.set_size = 3;
  spec.seed = 11;
  const auto psi = maxjsr::oracles::generate(spec);
  const auto nu = maxjsr::WeightedMaxNorm::uniform(spec.n);
  const auto m = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(maxjsr::product_extrema(psi, m, nu, E));
}

template <Execution E>
void BM_SetProbe(benchmark::State& state) {
  maxjsr::oracles::InstanceSpec spec;
  spec.n = 6;
  spec.set_size = 2;
  spec.seed = 13;
  const auto psi = maxjsr::oracles::generate(spec);
  const auto pairs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(maxjsr::probe_set_regularity(psi, 1e-3, pairs, 1.0, 1, E));
}

}  // namespace

BENCHMARK(BM_MaxMul<Execution::serial>)->RangeMultiplier(2)->Range(32, 512);
BENCHMARK(BM_MaxMul<Execution::parallel>)->RangeMultiplier(2)->Range(32, 512)->UseRealTime();
BENCHMARK(BM_ProductExtrema<Execution::serial>)->DenseRange(6, 9);
BENCHMARK(BM_ProductExtrema<Execution::parallel>)->DenseRange(6, 9)->UseRealTime();
BENCHMARK(BM_SetProbe<Execution::serial>)->Arg(512)->Arg(4096);
BENCHMARK(BM_SetProbe<Execution::parallel>)->Arg(512)->Arg(4096)->UseRealTime();

BENCHMARK_MAIN();
