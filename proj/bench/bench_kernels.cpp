// Parallel kernels against their serial references. Worker count follows OSCILLAB_THREADS.
#include <benchmark/benchmark.h>

#include "oscillab/broadnorm.hpp"
#include "oscillab/explab.hpp"
#include "oscillab/partitioning.hpp"
#include "oscillab/wavepackets.hpp"

using namespace osc;

namespace {

const PhaseField kPf2{32, 4};

const GridFunction& grid2d() {
  static const GridFunction g = GridFunction::sample({0.0, 0.0}, {1.0, 1.0}, {128, 128}, [](const Vec& w) {
    return cplx(w[0] * w[1], std::cos(5 * w[0]));
  });
  return g;
}

const std::vector<SpaceTimePoint>& points2d() {
  static const std::vector<SpaceTimePoint> pts = [] {
    std::vector<SpaceTimePoint> p;
    for (int i = 0; i < 64; ++i) p.push_back({{0.3 * i, -0.15 * i}, 10.0 + 0.6 * i});
    return p;
  }();
  return pts;
}

void BM_OscillatorySum(benchmark::State& st, bool parallel) {
  const Nodes nodes = nodes_from_grid(grid2d());
  for (auto _ : st) {
    auto v = parallel ? oscillatory_sum(kPf2, nodes, points2d())
                      : oscillatory_sum_serial(kPf2, nodes, points2d());
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_EvalH(benchmark::State& st, bool parallel) {
  for (auto _ : st) {
    auto v = parallel ? eval_H_lambda(kPf2, grid2d(), points2d())
                      : eval_H_lambda_serial(kPf2, grid2d(), points2d());
    benchmark::DoNotOptimize(v.data());
  }
}

const PhaseField kPf1{4096, 4};
const SpaceTimePoint kX0{{2048.0}, 4096.0};

const GridFunction& grid1d() {
  static const GridFunction g = random_smooth(1, 4096, CounterRng(1, "bench"));
  return g;
}

void BM_Decompose(benchmark::State& st, bool parallel) {
  for (auto _ : st) {
    PacketSet s = parallel ? decompose(grid1d(), 64, kX0, kPf1, 64 * 8)
                           : decompose_serial(grid1d(), 64, kX0, kPf1, 64 * 8);
    benchmark::DoNotOptimize(s.packets.data());
  }
}

void BM_EvalPackets(benchmark::State& st, bool parallel) {
  static const PacketSet s = decompose(grid1d(), 64, kX0, kPf1, 64 * 8);
  const std::vector<std::size_t> idx = s.all();
  std::vector<SpaceTimePoint> pts;
  for (int i = 0; i < 32; ++i) pts.push_back({{2048.0 + 4 * i}, 4000.0 + 3 * i});
  for (auto _ : st) {
    auto v = parallel ? eval_packets(s, idx, pts) : eval_packets_serial(s, idx, pts);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_Partition(benchmark::State& st, bool parallel) {
  WeightedPoints W;
  CounterRng rng(2, "bench-cube");
  for (int i = 0; i < 4000; ++i) {
    W.points.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    W.weights.push_back(1.0);
  }
  for (auto _ : st) {
    Partition P = parallel ? equal_mass_partition(W, 2) : equal_mass_partition_serial(W, 2);
    benchmark::DoNotOptimize(P.cells.data());
  }
}

void BM_BroadNorm(benchmark::State& st, bool parallel) {
  const int side = 8;
  std::vector<CapDirections> caps;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      caps.push_back(cap_directions({(i + 0.5) / side, (j + 0.5) / side}, 1.0 / side));
  CapField f{3, {0.0, 0.0, 0.0}, 1.0, {64, 32, 32}, caps, {}};
  CounterRng rng(3, "bench-field");
  f.values.assign(caps.size(), Vec(64 * 32 * 32, 0.0));
  for (auto& v : f.values)
    if (rng.uniform() < 0.5)
      for (auto& x : v) x = rng.uniform();
  BroadNormConfig cfg;
  cfg.K = 4;
  const Box U{{0.0, 0.0, 0.0}, {64.0, 32.0, 32.0}};
  for (auto _ : st) {
    double v = parallel ? broad_norm(f, U, cfg) : broad_norm_serial(f, U, cfg);
    benchmark::DoNotOptimize(v);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_OscillatorySum, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OscillatorySum, parallel, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_EvalH, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvalH, parallel, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Decompose, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Decompose, parallel, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_EvalPackets, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvalPackets, parallel, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Partition, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Partition, parallel, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_BroadNorm, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BroadNorm, parallel, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
