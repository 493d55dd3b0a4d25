// Microbenchmarks for the planner's hot paths: single-agent search, the
// segment collision kernel, the joint conflict sweep, budget reallocation,
// and a small end-to-end solve.
#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "riskcbs/allocation.hpp"
#include "riskcbs/bench.hpp"
#include "riskcbs/collision.hpp"
#include "riskcbs/low_level.hpp"
#include "riskcbs/solver.hpp"
#include "riskcbs/synthetic.hpp"

using namespace riskcbs;

namespace {

Instance make_world(int vertices, int agents, std::uint64_t seed) {
  SyntheticParams params;
  params.seed = seed;
  params.n_vertices = vertices;
  params.n_agents = agents;
  params.hazard.amplitude = 0.6;
  params.hazard.sigma = 0.22;
  params.connect_factor = 1.9;
  return build_synthetic_instance(params);
}

void BM_LowLevelSearch(benchmark::State& state) {
  const Instance inst = make_world(static_cast<int>(state.range(0)), 2, 17);
  LowLevelQuery q;
  q.graph = inst.graph.get();
  q.task = inst.tasks[0];
  for (auto _ : state) {
    const LowLevelResult res = rba_star(q);
    benchmark::DoNotOptimize(res.expansions);
  }
}
BENCHMARK(BM_LowLevelSearch)->Arg(40)->Arg(120)->Arg(300);

void BM_MinFeasibleRisk(benchmark::State& state) {
  const Instance inst = make_world(static_cast<int>(state.range(0)), 2, 17);
  LowLevelQuery q;
  q.graph = inst.graph.get();
  q.task = inst.tasks[0];
  for (auto _ : state) {
    const LowLevelResult res = min_feasible_risk(q);
    benchmark::DoNotOptimize(res.risk);
  }
}
BENCHMARK(BM_MinFeasibleRisk)->Arg(40)->Arg(120);

void BM_CollisionKernel(benchmark::State& state) {
  std::mt19937_64 rng(7);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec2> pts(4 * 256);
  for (Vec2& p : pts) p = {unit(), unit()};
  std::vector<PairwiseDistances> tables;
  for (int k = 0; k < 256; ++k) {
    PairwiseDistances t(4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const Vec2 a = pts[4 * k + i], b = pts[4 * k + j];
        t.set(i, j, std::hypot(a.x - b.x, a.y - b.y));
      }
    }
    tables.push_back(std::move(t));
  }
  const MotionSegment sa{0, 0, 1, 0}, sb{1, 2, 3, 0};
  const CollisionParams params;
  size_t k = 0;
  for (auto _ : state) {
    const SegmentCheck chk = check_segment_pair(sa, sb, tables[k & 255], params);
    benchmark::DoNotOptimize(chk.min_dist);
    ++k;
  }
}
BENCHMARK(BM_CollisionKernel);

void BM_ConflictSweep(benchmark::State& state) {
  const int agents = static_cast<int>(state.range(0));
  const Instance inst = make_world(80, agents, 23);
  // Deterministic random walks of 30 steps, one per agent.
  std::mt19937_64 rng(99);
  std::vector<TimedPath> paths;
  for (int a = 0; a < agents; ++a) {
    TimedPath p;
    p.agent_id = a;
    int at = inst.tasks[a].start;
    p.vertices.push_back(at);
    for (int t = 0; t < 30; ++t) {
      const auto& out = inst.graph->out_edges(at);
      if (!out.empty() && rng() % 4 != 0) at = out[rng() % out.size()].to;
      p.vertices.push_back(at);
    }
    paths.push_back(std::move(p));
  }
  CollisionParams params;
  params.radius = inst.radius;
  for (auto _ : state) {
    const auto conflicts = detect_collisions(paths, *inst.graph, params);
    benchmark::DoNotOptimize(conflicts.size());
  }
}
BENCHMARK(BM_ConflictSweep)->Arg(2)->Arg(4)->Arg(8);

void BM_Reallocate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<double> budgets(n), need(n);
  std::vector<char> failing(n, 0);
  for (int i = 0; i < n; ++i) {
    budgets[i] = 5.0 + unit();
    failing[i] = static_cast<char>(i % 3 == 0);
    need[i] = failing[i] ? budgets[i] + 0.1 * unit() : budgets[i] - 1.0;
  }
  for (auto _ : state) {
    auto out = reallocate(budgets, need, failing);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_Reallocate)->Arg(8)->Arg(64);

void BM_SolveSmall(benchmark::State& state) {
  const Instance inst = make_world(15, 3, 41);
  const auto interval = calibrate_interval(inst, 0.05);
  SolveRequest req;
  req.graph = inst.graph;
  req.tasks = inst.tasks;
  req.delta_global = interval ? delta_at(*interval, 0.5) : 1.0;
  req.collision.radius = inst.radius;
  req.timeout_seconds = 10.0;
  for (auto _ : state) {
    const Solution sol = solve(req);
    benchmark::DoNotOptimize(sol.cost);
  }
}
BENCHMARK(BM_SolveSmall);

}  // namespace

BENCHMARK_MAIN();
