#include <benchmark/benchmark.h>

#include "lamelab/glame.hpp"
#include "lamelab/green_hecke.hpp"
#include "lamelab/lame_curves.hpp"
#include "lamelab/monodromy.hpp"

using namespace lamelab;

namespace {

SourceDivisor three_points(const LatticeContext& ctx, int w1) {
  SourceDivisor L;
  L.points = {make_point(ctx, 0.13, 0.21), make_point(ctx, 0.48, 0.66), make_point(ctx, 0.79, 0.37)};
  L.weights = {w1, 1, 1};
  return L;
}

void BM_MakeContext(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(make_context(Complex(0.17, 1.13)));
}
BENCHMARK(BM_MakeContext);

void BM_EllipticValues(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.17, 1.13));
  const Complex z{0.31, 0.42};
  for (auto _ : state) benchmark::DoNotOptimize(elliptic_values(z, ctx));
}
BENCHMARK(BM_EllipticValues);

void BM_HeckeZ(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.17, 1.13));
  for (auto _ : state) benchmark::DoNotOptimize(hecke_Z(0.31, 0.42, ctx));
}
BENCHMARK(BM_HeckeZ);

void BM_CriticalPoints(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.5, 0.8660254037844386));
  for (auto _ : state) benchmark::DoNotOptimize(critical_points(ctx, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CriticalPoints)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PointOnXn(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.2, 1.1));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(point_on_Xn(n, Complex(1.3, -0.7), ctx));
}
BENCHMARK(BM_PointOnXn)->DenseRange(1, 4);

void BM_BuildSystem(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.17, 1.13));
  const SourceDivisor L = three_points(ctx, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_system(L, ctx));
}
BENCHMARK(BM_BuildSystem)->Arg(1)->Arg(3)->Arg(5);

void BM_SolveSystem(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.17, 1.13));
  const GLameSystem sys = build_system(three_points(ctx, static_cast<int>(state.range(0))), ctx);
  for (auto _ : state) benchmark::DoNotOptimize(solve_system(sys, ctx));
}
BENCHMARK(BM_SolveSystem)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_MonodromyPair(benchmark::State& state) {
  const LatticeContext ctx = make_context(Complex(0.17, 1.13));
  const SourceDivisor L = three_points(ctx, 1);
  const LameParams p = solve_system(build_system(L, ctx), ctx).solutions.at(0);
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_pair(L, p, ctx));
}
BENCHMARK(BM_MonodromyPair)->Unit(benchmark::kMillisecond);

void BM_TopTermRecursive(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(top_term_recursive(l));
}
BENCHMARK(BM_TopTermRecursive)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
