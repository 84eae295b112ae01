#include <benchmark/benchmark.h>

#include <random>

#include "zakbench/linalg.hpp"
#include "zakbench/zak.hpp"

namespace {

using namespace zakbench;

void BM_ThetaEval(benchmark::State& state) {
  const ThetaParams p = ThetaParams::standard(static_cast<int>(state.range(0)));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_zak_theta(x, 0.37, p));
    x += 1e-7;
  }
}
BENCHMARK(BM_ThetaEval)->Arg(8)->Arg(12)->Arg(16);

void BM_ZakGrid(benchmark::State& state) {
  const Index m = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zak_transform(gaussian_atom, m, kGaussianZakTerms));
  }
  state.SetItemsProcessed(state.iterations() * m * m);
}
BENCHMARK(BM_ZakGrid)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_FrameBounds(benchmark::State& state) {
  const Index dim = state.range(0);
  std::mt19937_64 rng(1);
  const FiniteFamily f = FiniteFamily::from_columns(random_cmatrix(dim, 2 * dim, rng), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(frame_bounds_estimate(f));
}
BENCHMARK(BM_FrameBounds)->Arg(8)->Arg(32)->Arg(128);

void BM_QuotientLevel(benchmark::State& state) {
  const Index m = state.range(0);
  const ThetaParams p = ThetaParams::standard();
  const SquareSampler theta = [p](double x, double xi) { return gaussian_zak_theta(x, xi, p); };
  const SquareSampler num = [](double x, double xi) { return Complex(cone({}, x, xi), 0.0); };
  for (auto _ : state) {
    const GridFunction a = GridFunction::sample(m, num);
    const GridFunction b = GridFunction::sample(m, theta);
    benchmark::DoNotOptimize(quotient_estimate(a, b));
  }
}
BENCHMARK(BM_QuotientLevel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
