#include <benchmark/benchmark.h>

#include <vector>

#include "starcap/analysis.hpp"
#include "starcap/oracle.hpp"
#include "starcap/solver.hpp"

using namespace starcap;

namespace {

StarshapedRing ellipse(const RadialConformalFactor& f) {
  const std::vector<double> outer{1.5, 0.0, 0.3};
  const std::vector<double> inner{0.5, 0.1};
  return StarshapedRing(RadialFunction::from_fourier(outer, {}, 256), RadialFunction::from_fourier(inner, {}, 256), f);
}

void BM_LinearSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const RingGrid g = build_grid(ellipse(RadialConformalFactor::euclidean(1.0)), m, 2 * m);
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(g, RhsSpec::zero(), SolverConfig{}).field.values.data());
  state.SetComplexityN(static_cast<long>(g.size()));
}
BENCHMARK(BM_LinearSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->Complexity();

void BM_QLaplace(benchmark::State& state) {
  SolverConfig cfg;
  cfg.q = static_cast<double>(state.range(1));
  const int m = static_cast<int>(state.range(0));
  const RingGrid g = build_grid(ellipse(RadialConformalFactor::hyperbolic(2.0)), m, 2 * m);
  int iterations = 0;
  for (auto _ : state) iterations = solve_qlaplace(g, RhsSpec::zero(), cfg).iterations;
  state.counters["picard"] = iterations;
}
BENCHMARK(BM_QLaplace)->Args({32, 3})->Args({64, 3})->Args({64, 4})->Unit(benchmark::kMillisecond);

void BM_Report(benchmark::State& state) {
  const RingGrid g = build_grid(ellipse(RadialConformalFactor::euclidean(1.0)), 128, 256);
  const ScalarField u = solve_linear(g, RhsSpec::zero(), SolverConfig{}).field;
  for (auto _ : state) benchmark::DoNotOptimize(starshape_report(u, 1e-6).verdict);
}
BENCHMARK(BM_Report)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const RadialPotential pot(RadialConformalFactor::sphere(1.0), 3, 2.5, 0.3, 0.8);
  double r = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pot(r));
    r = r > 0.79 ? 0.3 : r + 0.01;
  }
}
BENCHMARK(BM_Oracle);

}  // namespace

BENCHMARK_MAIN();
