#include <benchmark/benchmark.h>

#include "flv/liouville.hpp"
#include "flv/nlaplacian.hpp"

namespace {

flv::LiouvilleSolution make(int N) {
  flv::Vec x0 = flv::Vec::Zero(N);
  return flv::LiouvilleSolution(flv::Gauge::pnorm(N, 3.0), N, 1.0, x0, flv::ConvexCone::half_space(N));
}

flv::Vec point(int N) {
  flv::Vec x(N);
  for (int i = 0; i < N; ++i) x[i] = 0.4 - 0.1 * i;
  x[N - 1] = 0.7;
  return x;
}

void BM_SolutionEval(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto sol = make(N);
  flv::Vec x = point(N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flv::solution_eval(sol, x));
  }
}
BENCHMARK(BM_SolutionEval)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

// Stencil size grows like 3^N, each node a dual solve.
void BM_NlapResidual(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto sol = make(N);
  flv::Vec x = point(N);
  auto s = flv::FDScheme::with_step(1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flv::nlap_residual(sol, x, s));
  }
}
BENCHMARK(BM_NlapResidual)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
