// End-to-end acceptance gates for the risk-bounded multi-agent planner.
// Each gate re-derives its expected values from independent oracles (walk
// enumeration, dense sampling, joint-state brute force) and prints one
// [PASS]/[FAIL] line; the exit code is the number of failing gates.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riskcbs/baselines.hpp"
#include "riskcbs/bench.hpp"
#include "riskcbs/collision.hpp"
#include "riskcbs/low_level.hpp"
#include "riskcbs/solver.hpp"

using namespace riskcbs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GateResult {
  bool ok = true;
  long checks = 0;
  long failures = 0;
  std::string note;

  void expect(bool cond) {
    ++checks;
    if (!cond) {
      ++failures;
      ok = false;
    }
  }
};

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Gate 1: single-agent search vs exhaustive walk enumeration.

GateResult gate_low_level() {
  GateResult r;
  std::mt19937_64 rng(901);
  for (int rep = 0; rep < 500; ++rep) {
    const oracles::SmallCase c = oracles::make_small_case(rng, 8, 10, rep % 2 == 1);
    ConstraintTable table(c.graph->num_vertices(), c.task.agent_id, c.task.goal);
    table.add_all(c.constraints);
    const auto by_arrival =
        oracles::min_risk_by_arrival(*c.graph, c.task, c.constraints, c.horizon);

    std::vector<double> finite;
    for (double v : by_arrival) {
      if (std::isfinite(v)) finite.push_back(v);
    }
    std::sort(finite.begin(), finite.end());
    finite.erase(std::unique(finite.begin(), finite.end()), finite.end());

    std::vector<double> grid;
    if (finite.empty()) {
      for (int k = 0; k < 10; ++k) grid.push_back(0.25 * k);
    } else {
      grid = {finite.front(), finite.back(), std::max(0.0, finite.front() - 1e-3),
              finite.back() + 1.0, 0.5 * (finite.front() + finite.back())};
      for (int k = 0; k < 5; ++k) grid.push_back(finite[k % finite.size()]);
    }

    LowLevelQuery q;
    q.graph = c.graph.get();
    q.task = c.task;
    q.constraints = &table;
    q.horizon = c.horizon;

    for (const double delta : grid) {
      int expected = -1;
      for (int t = 0; t < static_cast<int>(by_arrival.size()); ++t) {
        // Within-budget carries the planner's 1e-9 rounding slack.
        if (by_arrival[t] <= delta + 1e-9) {
          expected = t;
          break;
        }
      }
      q.delta = delta;
      const LowLevelResult res = rba_star(q);
      r.expect(res.feasible() == (expected >= 0));
      if (res.feasible() && expected >= 0) {
        r.expect(res.path.arrival() == expected);
        r.expect(res.risk <= delta + 1e-9);
        r.expect(std::fabs(res.risk - by_arrival[expected]) <= 1e-9);
        r.expect(oracles::walk_satisfies(res.path.vertices, c.constraints, c.task.agent_id));
      }
    }

    q.delta = kInf;
    const LowLevelResult cheapest = min_feasible_risk(q);
    if (finite.empty()) {
      r.expect(!cheapest.feasible());
    } else {
      const double best = *std::min_element(finite.begin(), finite.end());
      r.expect(cheapest.feasible());
      if (cheapest.feasible()) r.expect(std::fabs(cheapest.risk - best) <= 1e-9);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gate 2: collision kernel identity and dense-sampling verdicts.

GateResult gate_collision_kernel() {
  GateResult r;
  std::mt19937_64 rng(77002);
  long skipped = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    Vec2 pts[4];
    for (Vec2& p : pts) p = {unit_draw(rng), unit_draw(rng)};
    PairwiseDistances table(4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
        table.set(i, j, std::sqrt(dx * dx + dy * dy));
      }
    }
    const MotionSegment sa{0, 0, 1, 0}, sb{1, 2, 3, 0};

    const QuadCoeffs k = quadratic_coefficients(sa, sb, table);
    const double dvx = (pts[3].x - pts[2].x) - (pts[1].x - pts[0].x);
    const double dvy = (pts[3].y - pts[2].y) - (pts[1].y - pts[0].y);
    const double dpx = pts[2].x - pts[0].x, dpy = pts[2].y - pts[0].y;
    r.expect(std::fabs(k.a - (dvx * dvx + dvy * dvy)) <= 1e-9);
    r.expect(std::fabs(k.b - 2.0 * (dpx * dvx + dpy * dvy)) <= 1e-9);
    r.expect(std::fabs(k.c - (dpx * dpx + dpy * dpy)) <= 1e-9);

    CollisionParams params;
    params.radius = 0.02 + 0.18 * unit_draw(rng);
    const SegmentCheck chk = check_segment_pair(sa, sb, table, params);

    double min_sq = kInf;
    for (int s = 0; s <= 10000; ++s) {
      const double tau = static_cast<double>(s) / 10000.0;
      const double ax = pts[0].x + tau * (pts[1].x - pts[0].x);
      const double ay = pts[0].y + tau * (pts[1].y - pts[0].y);
      const double bx = pts[2].x + tau * (pts[3].x - pts[2].x);
      const double by = pts[2].y + tau * (pts[3].y - pts[2].y);
      min_sq = std::min(min_sq, (ax - bx) * (ax - bx) + (ay - by) * (ay - by));
    }
    const double dense_min = std::sqrt(min_sq);
    if (std::fabs(chk.min_dist - 2.0 * params.radius) < 1e-6) {
      ++skipped;  // verdict undefined this close to the threshold
    } else {
      r.expect(chk.collision == (dense_min <= 2.0 * params.radius + params.eps));
    }
    r.expect(std::fabs(chk.min_dist - dense_min) <= 1e-5);
    r.expect(!chk.degenerate);  // Euclidean tables are always convex
  }
  r.note = "skipped " + std::to_string(skipped) + " near-threshold pairs";
  return r;
}

// ---------------------------------------------------------------------------
// Gate 3: every solver success is conflict-free and within the global budget.

GateResult gate_soundness() {
  GateResult r;
  const auto suite = make_benchmark_suite(400, Difficulty::Easy, 2026);
  const double scale = 0.01;  // per-solve deadline 0.6 * N seconds
  int collected = 0, successes = 0;
  for (const auto& [id, inst] : suite) {
    if (collected >= 200) break;
    if (inst.tasks.size() > 4) continue;
    const auto interval = calibrate_interval(inst, scale);
    if (!interval) continue;  // not verified solvable; skip
    ++collected;
    for (const double level : {0.5, 1.0}) {
      SolveRequest req;
      req.graph = inst.graph;
      req.tasks = inst.tasks;
      req.delta_global = delta_at(*interval, level);
      req.collision.radius = inst.radius;
      req.timeout_seconds = 60.0 * static_cast<double>(inst.tasks.size()) * scale;
      const Solution sol = solve(req);
      if (sol.status != SolveStatus::Success) continue;
      ++successes;
      r.expect(detect_collisions(sol.paths, *inst.graph, req.collision).empty());
      r.expect(sol.total_risk <= req.delta_global + 1e-9);
      for (size_t a = 0; a < inst.tasks.size(); ++a) {
        r.expect(!validate_path(sol.paths[a], *inst.graph, inst.tasks[a]).has_value());
      }
    }
  }
  r.expect(collected >= 200);
  r.expect(successes >= 100);  // the check is vacuous without a healthy success pool
  r.note = std::to_string(collected) + " instances, " + std::to_string(successes) + " successes";
  return r;
}

// ---------------------------------------------------------------------------
// Gate 4: solver cost equals the joint-state brute-force optimum.

GateResult gate_joint_optimality() {
  GateResult r;
  std::mt19937_64 rng(30704);
  const int kSteps = 6;
  int done = 0, attempts = 0;
  while (done < 100 && attempts < 1000) {
    ++attempts;
    const Instance inst = oracles::make_tiny_instance(rng);
    const auto interval = calibrate_interval(inst, 1.0, kSteps);
    if (!interval) continue;
    ++done;
    const double delta = interval->upper;

    SolveRequest req;
    req.graph = inst.graph;
    req.tasks = inst.tasks;
    req.delta_global = delta;
    req.collision.radius = inst.radius;
    req.horizon = kSteps;
    req.timeout_seconds = 10.0;
    const Solution sol = solve(req);
    const long long best = oracles::joint_optimal_cost(inst, kSteps, delta);

    r.expect(sol.status == SolveStatus::Success);
    r.expect(best >= 0);
    if (sol.status == SolveStatus::Success && best >= 0) {
      r.expect(sol.cost == best);
      r.expect(sol.total_risk <= delta + 1e-9);
      r.expect(detect_collisions(sol.paths, *inst.graph, req.collision).empty());
    }
  }
  r.expect(done == 100);
  r.note = std::to_string(done) + " instances in " + std::to_string(attempts) + " attempts";
  return r;
}

// ---------------------------------------------------------------------------
// Gate 5: one reallocation round, checked against its algebraic contract.

GateResult gate_reallocation() {
  GateResult r;
  std::mt19937_64 rng(550001);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 7);
    std::vector<double> budgets(n), need(n);
    std::vector<char> failing(n, 0);
    for (int i = 0; i < n; ++i) {
      budgets[i] = 10.0 * unit_draw(rng);
      failing[i] = static_cast<char>(rng() % 2);
      need[i] = failing[i] ? budgets[i] + 3.0 * unit_draw(rng) : budgets[i] * unit_draw(rng);
    }
    double required = 0.0, available = 0.0;
    for (int i = 0; i < n; ++i) {
      if (failing[i]) required += need[i] - budgets[i];
      else available += budgets[i] - need[i];
    }

    const auto out = reallocate(budgets, need, failing);
    r.expect(out.has_value() == !(required > available));
    if (!out) {
      ++infeasible_seen;
      continue;
    }
    ++feasible_seen;
    double before = 0.0, after = 0.0;
    for (int i = 0; i < n; ++i) {
      before += budgets[i];
      after += (*out)[i];
      if (failing[i]) {
        r.expect(std::fabs((*out)[i] - need[i]) <= 1e-12);
      } else {
        r.expect((*out)[i] >= need[i] - 1e-12);
        r.expect((*out)[i] <= budgets[i] + 1e-12);
      }
    }
    r.expect(after <= before + 1e-12);
  }
  r.expect(feasible_seen > 100);
  r.expect(infeasible_seen > 100);
  r.note = std::to_string(feasible_seen) + " feasible / " + std::to_string(infeasible_seen) +
           " infeasible rounds";
  return r;
}

// ---------------------------------------------------------------------------
// Gate 6: initial allocation closed forms.

GateResult gate_allocation_forms() {
  GateResult r;
  std::mt19937_64 rng(660001);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const double total = 20.0 * unit_draw(rng);
    std::vector<double> u(n);
    for (double& x : u) x = 0.05 + 5.0 * unit_draw(rng);
    const double sum_u = std::accumulate(u.begin(), u.end(), 0.0);
    double sum_inv = 0.0;
    for (double x : u) sum_inv += 1.0 / x;

    const auto even = initial_allocation(AllocationStrategy::Uniform, total, u, n);
    const auto prop = initial_allocation(AllocationStrategy::Utility, total, u, n);
    const auto inv = initial_allocation(AllocationStrategy::InverseUtility, total, u, n);
    double se = 0.0, sp = 0.0, si = 0.0;
    for (int i = 0; i < n; ++i) {
      r.expect(std::fabs(even[i] - total / n) <= 1e-12);
      r.expect(std::fabs(prop[i] - total * u[i] / sum_u) <= 1e-12);
      r.expect(std::fabs(inv[i] - total * (1.0 / u[i]) / sum_inv) <= 1e-12);
      r.expect(even[i] >= -1e-12);
      r.expect(prop[i] >= -1e-12);
      r.expect(inv[i] >= -1e-12);
      se += even[i];
      sp += prop[i];
      si += inv[i];
    }
    r.expect(std::fabs(se - total) <= 1e-12);
    r.expect(std::fabs(sp - total) <= 1e-12);
    r.expect(std::fabs(si - total) <= 1e-12);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gate 7: sweeping the budget from tight to generous trades steps for risk.

GateResult gate_trends() {
  GateResult r;
  BenchConfig cfg;
  cfg.instances = make_benchmark_suite(30, Difficulty::Easy, 1105);
  cfg.methods = {Method::RbCbs};
  cfg.levels = {0.0, 0.25, 0.5, 0.75, 1.0};
  cfg.timeout_scale = 0.02;
  cfg.zero_timing = true;
  const BenchReport report = run_benchmark(cfg);

  const AggregateRow* rows[5] = {};
  for (const AggregateRow& row : report.aggregates) {
    for (int k = 0; k < 5; ++k) {
      if (row.level == cfg.levels[k]) rows[k] = &row;
    }
  }
  for (int k = 0; k < 5; ++k) r.expect(rows[k] != nullptr);
  if (!r.ok) return r;

  // Paths may only get shorter as the budget loosens, and riskier.
  r.expect(rows[0]->successes > 0);
  r.expect(rows[4]->successes > 0);
  r.expect(rows[4]->mean_steps <= rows[0]->mean_steps + 1e-9);
  r.expect(rows[0]->mean_cost <= rows[4]->mean_cost + 1e-9);

  // The tightest budget is the hardest: every looser level succeeds at least
  // as often.
  const double rate0 = static_cast<double>(rows[0]->successes) / rows[0]->trials;
  for (int k = 1; k < 5; ++k) {
    const double rate = static_cast<double>(rows[k]->successes) / rows[k]->trials;
    r.expect(rate >= rate0);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "success %d/%d at 0%%, %d/%d at 100%%; steps %.2f->%.2f; risk %.3f->%.3f",
                rows[0]->successes, rows[0]->trials, rows[4]->successes, rows[4]->trials,
                rows[0]->mean_steps, rows[4]->mean_steps, rows[0]->mean_cost, rows[4]->mean_cost);
  r.note = buf;
  return r;
}

// ---------------------------------------------------------------------------
// Gate 8: Pareto frontier vs enumeration, plus budget selection.

GateResult gate_pareto() {
  GateResult r;
  std::mt19937_64 rng(80901);
  for (int rep = 0; rep < 200; ++rep) {
    const oracles::SmallCase c = oracles::make_small_case(rng, 7, 6, rep % 2 == 1);
    ConstraintTable table(c.graph->num_vertices(), c.task.agent_id, c.task.goal);
    table.add_all(c.constraints);
    const ParetoResult res = pareto_search(*c.graph, c.task, &table, c.horizon);

    const auto by_arrival =
        oracles::min_risk_by_arrival(*c.graph, c.task, c.constraints, c.horizon);
    std::vector<std::pair<int, double>> expected;
    double best = kInf;
    for (int t = 0; t < static_cast<int>(by_arrival.size()); ++t) {
      if (by_arrival[t] < best - 1e-12) {
        expected.emplace_back(t, by_arrival[t]);
        best = by_arrival[t];
      }
    }

    r.expect(res.frontier.size() == expected.size());
    if (res.frontier.size() != expected.size()) continue;
    for (size_t k = 0; k < expected.size(); ++k) {
      r.expect(res.frontier[k].length == expected[k].first);
      r.expect(std::fabs(res.frontier[k].risk - expected[k].second) <= 1e-9);
      r.expect(res.frontier[k].path.arrival() == expected[k].first);
      r.expect(oracles::walk_satisfies(res.frontier[k].path.vertices, c.constraints,
                                       c.task.agent_id));
    }

    // Selection: the shortest member whose risk fits, for budgets on and
    // around every frontier value.
    std::vector<double> budgets;
    for (const auto& [len, risk] : expected) {
      budgets.push_back(risk);
      budgets.push_back(risk + 1e-6);
      budgets.push_back(risk - 1e-6);
    }
    budgets.push_back(kInf);
    budgets.push_back(-1.0);
    for (const double b : budgets) {
      int want = -1;
      for (const auto& [len, risk] : expected) {
        if (risk <= b) {
          want = len;
          break;
        }
      }
      const auto got = select_within_budget(res.frontier, b);
      r.expect(got.has_value() == (want >= 0));
      if (got && want >= 0) r.expect(got->length == want);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gate 9: benchmark protocol (level schedule, deadlines, reproducible CSV).

GateResult gate_protocol() {
  GateResult r;

  // Five-level schedule over the calibrated interval.
  const BenchConfig defaults;
  r.expect(defaults.levels == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const Instance diamond = oracles::make_diamond();
  const auto interval = calibrate_interval(diamond);
  r.expect(interval.has_value());
  if (interval) {
    const double expected[5] = {0.0, 2.5, 5.0, 7.5, 10.0};
    for (int k = 0; k < 5; ++k) {
      r.expect(std::fabs(delta_at(*interval, defaults.levels[k]) - expected[k]) <= 1e-9);
    }
  }

  // The default deadline is 60 seconds per agent.
  SolveRequest req;
  req.graph = diamond.graph;
  req.tasks = diamond.tasks;
  req.delta_global = 10.0;
  req.collision.radius = diamond.radius;
  const Solution one = solve(req);
  r.expect(std::fabs(one.stats.deadline_seconds - 60.0) <= 1e-9);
  const Instance two_copies = oracles::make_diamond(2);
  SolveRequest req2;
  req2.graph = two_copies.graph;
  req2.tasks = two_copies.tasks;
  req2.delta_global = 20.0;
  req2.collision.radius = two_copies.radius;
  const Solution two = solve(req2);
  r.expect(std::fabs(two.stats.deadline_seconds - 120.0) <= 1e-9);

  // Enforcement on an instance that can never finish: the solve stops at its
  // deadline instead of running forever.
  const Instance corridor = oracles::make_corridor();
  SolveRequest hard;
  hard.graph = corridor.graph;
  hard.tasks = corridor.tasks;
  hard.delta_global = 1000.0;
  hard.collision.radius = corridor.radius;
  hard.timeout_seconds = 0.3;
  const auto t0 = std::chrono::steady_clock::now();
  const Solution stopped = solve(hard);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.expect(stopped.status == SolveStatus::Timeout);
  r.expect(stopped.stats.wall_seconds >= 0.25);
  r.expect(elapsed < 10.0);
  r.expect(std::fabs(stopped.stats.deadline_seconds - 0.3) <= 1e-9);

  // The benchmark harness applies the same 60*N*scale deadline per trial.
  BenchConfig hard_cfg;
  hard_cfg.instances.emplace_back("corridor", corridor);
  hard_cfg.methods = {Method::RbCbs};
  hard_cfg.levels = {1.0};
  hard_cfg.timeout_scale = 0.001;  // 0.24 s per solve for four agents
  hard_cfg.zero_timing = true;
  const auto b0 = std::chrono::steady_clock::now();
  const BenchReport hard_report = run_benchmark(hard_cfg);
  const double bench_elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - b0).count();
  r.expect(hard_report.records.size() == 1);
  if (!hard_report.records.empty()) r.expect(!hard_report.records[0].success);
  r.expect(bench_elapsed < 30.0);

  // Reruns with identical configuration produce byte-identical CSV.
  BenchConfig cfg;
  cfg.instances = make_benchmark_suite(3, Difficulty::Easy, 11);
  cfg.methods = {Method::RbCbs, Method::Pruned};
  cfg.levels = {0.0, 0.5, 1.0};
  cfg.timeout_scale = 0.05;
  cfg.zero_timing = true;
  const std::string csv_a = to_csv(run_benchmark(cfg).records);
  const std::string csv_b = to_csv(run_benchmark(cfg).records);
  r.expect(!csv_a.empty());
  r.expect(csv_a == csv_b);
  r.expect(csv_a.rfind("instance,method,level,success,total_risk,avg_steps,wall_ms,ct_nodes,reallocs\n",
                       0) == 0);
  return r;
}

}  // namespace

int main() {
  struct Gate {
    const char* name;
    std::function<GateResult()> run;
  };
  const std::vector<Gate> gates = {
      {"low-level search matches exhaustive enumeration", gate_low_level},
      {"collision kernel matches dot-product form and dense sampling", gate_collision_kernel},
      {"solver successes are conflict-free and within budget", gate_soundness},
      {"solver cost equals joint brute-force optimum on tiny instances", gate_joint_optimality},
      {"budget reallocation algebra", gate_reallocation},
      {"initial allocation closed forms", gate_allocation_forms},
      {"risk-level sweep reproduces the budget/steps trade-off", gate_trends},
      {"pareto frontier matches enumeration and budget selection", gate_pareto},
      {"benchmark protocol: schedule, deadlines, deterministic csv", gate_protocol},
  };

  int failed = 0;
  for (const Gate& gate : gates) {
    const auto t0 = std::chrono::steady_clock::now();
    const GateResult res = gate.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!res.ok) ++failed;
    std::printf("[%s] %s (%ld checks, %ld failed, %.1fs%s%s)\n", res.ok ? "PASS" : "FAIL",
                gate.name, res.checks, res.failures, secs, res.note.empty() ? "" : "; ",
                res.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu gates passed\n", static_cast<int>(gates.size()) - failed, gates.size());
  return failed;
}
