// Gauge and dual gauge evaluation costs.
#include <benchmark/benchmark.h>

#include "flv/dual.hpp"
#include "flv/gauge.hpp"

namespace {

flv::Gauge pick(int which, int N) {
  switch (which) {
    case 0: return flv::Gauge::euclidean(N);
    case 1: return flv::Gauge::pnorm(N, 4.0);
    default: {
      flv::Mat A = flv::Mat::Identity(N, N);
      A(0, 0) = 2.0;
      A(0, 1) = A(1, 0) = 0.3;
      return flv::Gauge::ellipsoid(A);
    }
  }
}

flv::Vec probe(int N) {
  flv::Vec x(N);
  for (int i = 0; i < N; ++i) x[i] = 0.3 + 0.2 * i;
  return x;
}

void BM_GaugeValue(benchmark::State& state) {
  const int N = static_cast<int>(state.range(1));
  flv::Gauge g = pick(static_cast<int>(state.range(0)), N);
  flv::Vec x = probe(N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.value(x));
  }
}
BENCHMARK(BM_GaugeValue)->ArgsProduct({{0, 1, 2}, {2, 3}});

void BM_DualEval(benchmark::State& state) {
  const int N = static_cast<int>(state.range(1));
  flv::Gauge g = pick(static_cast<int>(state.range(0)), N);
  flv::Vec x = probe(N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flv::dual_eval(g, x));
  }
}
BENCHMARK(BM_DualEval)->ArgsProduct({{0, 1, 2}, {2, 3}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
