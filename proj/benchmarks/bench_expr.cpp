#include <benchmark/benchmark.h>

#include <vector>

#include "jetgeo/expr.hpp"

using namespace jetgeo;

namespace {

const char* kSphereFactor = "4/(1+x1^2+x2^2)^2";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_expr(kSphereFactor, 2));
}
BENCHMARK(BM_Parse);

void BM_EvalTree(benchmark::State& state) {
  const Expr e = parse_expr(kSphereFactor, 2);
  const double p[] = {0.3, -0.2};
  for (auto _ : state) benchmark::DoNotOptimize(eval(e, p));
}
BENCHMARK(BM_EvalTree);

void BM_SecondDerivatives(benchmark::State& state) {
  const Expr e = parse_expr(kSphereFactor, 2);
  for (auto _ : state) {
    Differentiator d;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) benchmark::DoNotOptimize(d(d(e, a), b));
  }
}
BENCHMARK(BM_SecondDerivatives);

void BM_ProgramRun(benchmark::State& state) {
  const Expr e = parse_expr(kSphereFactor, 2);
  Differentiator d;
  std::vector<Expr> outs{e};
  for (int a = 0; a < 2; ++a) {
    outs.push_back(d(e, a));
    for (int b = 0; b < 2; ++b) outs.push_back(d(d(e, a), b));
  }
  const Program prog(outs);
  const double p[] = {0.3, -0.2};
  std::vector<double> out(prog.output_count());
  for (auto _ : state) {
    prog.run(p, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ProgramRun);

}  // namespace
