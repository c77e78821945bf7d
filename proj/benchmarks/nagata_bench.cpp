#include <benchmark/benchmark.h>

#include <numeric>

#include "nagata/cover.hpp"
#include "nagata/lie_algebra.hpp"
#include "nagata/metric.hpp"

using namespace nagata;

static void BM_HeisenbergBall(benchmark::State& state) {
  const auto m = heisenberg_model();
  for (auto _ : state) benchmark::DoNotOptimize(bfs_ball(m, static_cast<int>(state.range(0)))->size());
}
BENCHMARK(BM_HeisenbergBall)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_LamplighterBall(benchmark::State& state) {
  const auto m = lamplighter_model();
  for (auto _ : state) benchmark::DoNotOptimize(bfs_ball(m, static_cast<int>(state.range(0)))->size());
}
BENCHMARK(BM_LamplighterBall)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Components(benchmark::State& state) {
  const auto b = bfs_ball(heisenberg_model(), 20);
  std::vector<WordBall::Index> half;
  for (WordBall::Index i = 0; i < b->size(); i += 2) half.push_back(i);
  const double s = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(s_scale_components(*b, half, s).size());
}
BENCHMARK(BM_Components)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_VerifyBrickZ2(benchmark::State& state) {
  const auto b = bfs_ball(abelian_model(2), 60);
  const auto c = brick_cover(b, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_control(c, b).verified_bound);
}
BENCHMARK(BM_VerifyBrickZ2)->Arg(2)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SubsetDiameter(benchmark::State& state) {
  const auto b = bfs_ball(heisenberg_model(), 16);
  BallBfs bfs(b);
  std::vector<WordBall::Index> members(b->prefix(static_cast<int>(state.range(0))));
  std::iota(members.begin(), members.end(), WordBall::Index{0});
  for (auto _ : state) benchmark::DoNotOptimize(subset_diameter(bfs, members));
}
BENCHMARK(BM_SubsetDiameter)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_LowerCentralSeries(benchmark::State& state) {
  const LieAlgebra f("filiform4", 4, std::vector<StructureConstant>{{0, 1, 2, 1}, {0, 2, 3, 1}});
  for (auto _ : state) benchmark::DoNotOptimize(lower_central_series(f).dims.size());
}
BENCHMARK(BM_LowerCentralSeries);

BENCHMARK_MAIN();
