#include <benchmark/benchmark.h>

#include "steinkit/blockdiag.hpp"
#include "steinkit/codim2.hpp"
#include "steinkit/generators.hpp"
#include "steinkit/jacobi.hpp"
#include "steinkit/veronese.hpp"

namespace {

using namespace steinkit;

void BM_TwoSteinQuartic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ShapeFamily f = generate({GeneratorKind::Commuting, n, 2, 1, {}, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(two_stein_quartic(f));
  state.SetComplexityN(n);
}
BENCHMARK(BM_TwoSteinQuartic)->DenseRange(4, 16, 4)->Complexity();

void BM_BlockDiagonalize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PencilPair p = scrambled_pencil(random_census(n, 2.0, 3), 2.0, 4);
  for (auto _ : state) benchmark::DoNotOptimize(simultaneous_block_diagonalize(p));
}
BENCHMARK(BM_BlockDiagonalize)->DenseRange(4, 16, 4);

void BM_Analyze(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ShapeFamily f = commuting_family(0.5, constant_curvature_lambdas(n, 2, 0.3, 5), random_orthogonal(n, 6));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(f));
}
BENCHMARK(BM_Analyze)->DenseRange(4, 12, 4);

void BM_Veronese(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(veronese_family(Complex3(1, 0, 0)));
}
BENCHMARK(BM_Veronese);

}  // namespace
BENCHMARK_MAIN();
