#include <benchmark/benchmark.h>

#include <vector>

#include "hermgen/coeff_solver.hpp"
#include "hermgen/genmodel.hpp"
#include "hermgen/hermite.hpp"
#include "hermgen/moments.hpp"
#include "hermgen/rng.hpp"
#include "hermgen/trainer.hpp"

using namespace hermgen;

static void BM_HeEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double z = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(he_eval(n, z));
    z += 1e-9;
  }
}
BENCHMARK(BM_HeEval)->Arg(3)->Arg(10)->Arg(40);

static void BM_GaussHermite(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_hermite(n));
}
BENCHMARK(BM_GaussHermite)->Arg(20)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_SeriesCumulants(benchmark::State& state) {
  const HermiteSeries s{0.4, 0.5, 0.2, 0.2};
  for (auto _ : state) benchmark::DoNotOptimize(series_cumulants(s, 4));
}
BENCHMARK(BM_SeriesCumulants);

static void BM_SolveCoefficients(benchmark::State& state) {
  const CumulantVector targets = series_cumulants(HermiteSeries{0.1, 0.7, 0.15, -0.05}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_coefficients(targets, 3));
}
BENCHMARK(BM_SolveCoefficients)->Unit(benchmark::kMicrosecond);

static void BM_Generate(benchmark::State& state) {
  const Index d = state.range(0);
  const GenModelParams p = GenModelParams::identity(d, HermiteSeries{0.4, 0.5, 0.2, 0.2});
  const Index n = 1000;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(p, n, seed++));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Generate)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_SampleCumulants(benchmark::State& state) {
  const RowMatrix x = standard_gaussian(1, state.range(0), 5);
  const std::vector<double> data(x.data(), x.data() + x.size());
  for (auto _ : state) benchmark::DoNotOptimize(sample_cumulants(data, 4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCumulants)->Arg(100000)->Unit(benchmark::kMicrosecond);

static void BM_SgdStep(benchmark::State& state) {
  const Index d = state.range(0);
  TwoLayerNet net = init_net(d, 8, 0.125, 1);
  const RowMatrix x = standard_gaussian(d, 1, 2);
  const Eigen::VectorXd v = x.row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(sgd_step(net, v, 1.0, 1e-6));
}
BENCHMARK(BM_SgdStep)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
