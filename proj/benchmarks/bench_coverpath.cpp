#include <benchmark/benchmark.h>

#include "coverpath/harness.hpp"
#include "coverpath/metrics.hpp"
#include "coverpath/nav.hpp"
#include "coverpath/patterns.hpp"
#include "coverpath/planner.hpp"

using namespace coverpath;

namespace {

void BM_CoverageWalk(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap map = GridMap::rectangle(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(coverage_walk(map, {n / 2, n / 2}));
}
BENCHMARK(BM_CoverageWalk)->Arg(5)->Arg(7)->Arg(11);

void BM_CoverageWalkObstacles(benchmark::State& state) {
  const MapSpec spec = *builtin_map(state.range(0) == 0 ? "pillars7" : "ushape9");
  const CellCoord start = spec.map->free_cells().back();
  for (auto _ : state) benchmark::DoNotOptimize(coverage_walk(*spec.map, start));
}
BENCHMARK(BM_CoverageWalkObstacles)->Arg(0)->Arg(1);

void BM_Evaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap map = GridMap::rectangle(n, n);
  const WaypointPath path = lawnmower(map, {0, 0});
  const Thresholds th = Thresholds::defaults_for(map);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(map, {0, 0}, path, th));
}
BENCHMARK(BM_Evaluate)->Arg(5)->Arg(11)->Arg(31);

void BM_ParseWaypoints(benchmark::State& state) {
  const GridMap map = GridMap::rectangle(11, 11);
  const std::string text = format_waypoints(lawnmower(map, {0, 0}));
  for (auto _ : state) benchmark::DoNotOptimize(parse_waypoints(text, map));
}
BENCHMARK(BM_ParseWaypoints);

void BM_Follow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto map = std::make_shared<const GridMap>(GridMap::rectangle(n, n));
  const WaypointPath path = lawnmower(*map, {0, 0});
  const FollowMethod method = state.range(1) == 0 ? FollowMethod::TurnAndDrive : FollowMethod::DogCurve;
  const FollowerConfig cfg = FollowerConfig::defaults_for(1.0, method);
  for (auto _ : state) {
    World world(map, {0.5, 0.5, 0.0});
    benchmark::DoNotOptimize(follow(world, path, cfg, MotionLimits{}));
  }
}
BENCHMARK(BM_Follow)->Args({5, 0})->Args({5, 1})->Args({11, 0})->Args({11, 1});

void BM_ScriptedExperiment(benchmark::State& state) {
  const std::vector<MapSpec> maps = {*builtin_map("free5"), *builtin_map("free7"), *builtin_map("pillars7")};
  const std::vector<ProviderSpec> providers = {optimal_oracle("optimal")};
  EpisodeConfig cfg;
  cfg.clock = frozen_clock();
  ExperimentOptions opts;
  opts.episodes_per_cell = 10;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(maps, providers, cfg, opts));
}
BENCHMARK(BM_ScriptedExperiment)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
