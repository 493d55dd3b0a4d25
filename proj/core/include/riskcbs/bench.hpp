#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riskcbs/baselines.hpp"
#include "riskcbs/instance.hpp"
#include "riskcbs/solver.hpp"
#include "riskcbs/synthetic.hpp"

namespace riskcbs {

// Feasible global-budget interval of an instance: lower is the total risk of
// the risk-minimizing conflict-free solution, upper that of the
// length-minimizing one.
struct RiskInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// Solves the instance twice (length objective, then risk objective) to bound
// the interesting budget range. nullopt when either solve fails or times out;
// failure, when given, receives the failing solve's status.
std::optional<RiskInterval> calibrate_interval(const Instance& instance,
                                               double timeout_scale = 1.0, int horizon = 0,
                                               SolveStatus* failure = nullptr);

// Budget at fraction p in [0, 1] of the interval.
double delta_at(const RiskInterval& interval, double p);

enum class Method { RbCbs, Lagrangian, Pareto, Pruned };
std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct TrialRecord {
  std::string instance;
  Method method = Method::RbCbs;
  double level = 0.0;  // fraction of the risk interval, 0..1
  bool success = false;
  double total_risk = 0.0;
  double avg_steps = 0.0;
  double wall_ms = 0.0;
  long ct_nodes = 0;
  long reallocs = 0;
  SolveStatus status = SolveStatus::NoSolution;
};

struct BenchConfig {
  std::vector<std::pair<std::string, Instance>> instances;  // (id, instance)
  std::vector<Method> methods{Method::RbCbs, Method::Lagrangian, Method::Pareto, Method::Pruned};
  std::vector<double> levels{0.0, 0.25, 0.5, 0.75, 1.0};
  AllocationStrategy allocation = AllocationStrategy::Utility;
  double lambda = 1.0;
  double prune_quantile = 0.5;
  double timeout_scale = 1.0;  // per-trial deadline = 60 * N * scale seconds
  int horizon = 0;
  int workers = 0;          // 0 -> hardware concurrency (capped)
  bool zero_timing = false; // report wall_ms as 0 so repeated runs diff clean
};

struct AggregateRow {
  Method method = Method::RbCbs;
  double level = 0.0;
  int trials = 0;
  int successes = 0;
  double mean_cost = 0.0;  // mean total risk over successes
  double std_cost = 0.0;
  double mean_steps = 0.0;
  double std_steps = 0.0;
};

struct BenchReport {
  std::vector<TrialRecord> records;      // instance-major, then method, then level
  std::vector<AggregateRow> aggregates;  // per (method, level)
};

// Runs every (instance, method, level) trial with independent deadlines in a
// bounded worker pool. Deterministic output order and contents for a fixed
// config (with zero_timing, byte-identical CSV across runs).
BenchReport run_benchmark(const BenchConfig& config);

std::string to_csv(const std::vector<TrialRecord>& records);
std::string format_report(const std::vector<AggregateRow>& rows);

enum class Difficulty { Easy, Medium, Hard };
std::optional<Difficulty> parse_difficulty(const std::string& name);

// Deterministic desk-scale suite: vertex counts cycle through {5, 10, 20,
// 40}, agent counts through 2..6 (capped at half the vertices), seeds
// base_seed + index. Difficulty scales hazard amplitude and corridor width.
std::vector<std::pair<std::string, Instance>> make_benchmark_suite(int count,
                                                                   Difficulty difficulty,
                                                                   unsigned base_seed = 0);

}  // namespace riskcbs
