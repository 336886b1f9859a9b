#include <benchmark/benchmark.h>

#include "copent/assoc.hpp"
#include "copent/classic.hpp"
#include "copent/entropy.hpp"
#include "copent/synth.hpp"

using namespace copent;

static void BM_KnnEntropy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Matrix points = to_points(synth::generate({synth::Uniform{d}, n, 1}));
  for (auto _ : state) benchmark::DoNotOptimize(knn_entropy(points, {}).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KnnEntropy)->Args({1000, 2})->Args({10000, 2})->Args({100000, 2})->Args({10000, 5});

static void BM_Kendall(benchmark::State& state) {
  const auto ds = synth::generate({synth::GaussianPair{0.5}, static_cast<std::size_t>(state.range(0)), 1});
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(ds.column(0).values, ds.column(1).values).value);
}
BENCHMARK(BM_Kendall)->Range(1000, 1 << 20);

static void BM_AssocMatrix(benchmark::State& state) {
  const auto ds = synth::generate({synth::Uniform{static_cast<std::size_t>(state.range(0))}, 2000, 1});
  for (auto _ : state) benchmark::DoNotOptimize(association_matrix(ds, Measure::ce).values.data());
}
BENCHMARK(BM_AssocMatrix)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
