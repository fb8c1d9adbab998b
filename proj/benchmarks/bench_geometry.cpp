#include <benchmark/benchmark.h>

#include "jetgeo/catalog.hpp"
#include "jetgeo/integrator.hpp"

using namespace jetgeo;

namespace {

Jet2Element sample_jet(int n, double shift) {
  Matrix a1 = Matrix::Identity(n, n);
  Tensor3 a2(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a1(i, j) += 0.1 * (i - j) + 0.05 * shift;
      for (int k = 0; k <= j; ++k) a2(i, j, k) = a2(i, k, j) = 0.2 * (i + 1) - 0.1 * (j * k) + shift;
    }
  return {a1, a2};
}

void BM_Compose2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Jet2Element a = sample_jet(n, 0.1), b = sample_jet(n, -0.3);
  for (auto _ : state) benchmark::DoNotOptimize(compose2(a, b));
}
BENCHMARK(BM_Compose2)->DenseRange(1, 3);

void BM_FiberBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sphere = catalog_metric("sphere", n).object;
  const Point p(n, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(fiber_basis(sphere, p));
}
BENCHMARK(BM_FiberBasis)->DenseRange(2, 3);

void BM_IntegrateKilling(benchmark::State& state) {
  const auto sphere = catalog_metric("sphere", 2).object;
  const JetVector init = prolong(catalog_metric("sphere", 2).killing_fields[0], 1).at(Point{0.0, 0.0});
  const PathSpec path = PathSpec::polyline({{0.0, 0.0}, {0.5, 0.3}}, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_killing(sphere, init, path));
}
BENCHMARK(BM_IntegrateKilling)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
