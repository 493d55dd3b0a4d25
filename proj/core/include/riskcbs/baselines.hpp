#pragma once

#include <optional>
#include <vector>

#include "riskcbs/low_level.hpp"
#include "riskcbs/solver.hpp"

namespace riskcbs {

// Minimizes arrival + lambda * risk over constraint-satisfying paths.
// lambda = 0 degenerates to the unconstrained min-arrival search. Ties prefer
// smaller arrival, then smaller risk, then the lexicographically smaller
// vertex sequence.
LowLevelResult lagrangian_search(const WaypointGraph& graph, const AgentTask& task,
                                 const ConstraintTable* constraints, double lambda,
                                 int horizon = 0, const Deadline* deadline = nullptr);

struct ParetoPoint {
  int length = 0;    // arrival timestep
  double risk = 0.0; // minimum accumulated risk at that arrival
  TimedPath path;
};

struct ParetoResult {
  LowLevelStatus status = LowLevelStatus::Infeasible;  // Found iff frontier nonempty
  std::vector<ParetoPoint> frontier;                   // ascending length, descending risk
};

// Complete non-dominated (length, risk) frontier at the goal, up to the
// horizon, under the given constraints.
ParetoResult pareto_search(const WaypointGraph& graph, const AgentTask& task,
                           const ConstraintTable* constraints, int horizon = 0,
                           const Deadline* deadline = nullptr);

// Shortest frontier member whose risk fits the budget.
std::optional<ParetoPoint> select_within_budget(const std::vector<ParetoPoint>& frontier,
                                                double budget);

// Min-arrival search on the subgraph of edges with risk <= threshold. Fails
// when pruning disconnects the task, which is this method's known weakness.
LowLevelResult pruned_graph_search(const WaypointGraph& graph, const AgentTask& task,
                                   const ConstraintTable* constraints,
                                   double edge_risk_threshold, int horizon = 0,
                                   const Deadline* deadline = nullptr);

// Empirical quantile of the graph's edge-risk distribution (q in [0, 1]),
// used as the default pruning threshold.
double risk_quantile(const WaypointGraph& graph, double q);

enum class BaselineMethod { Lagrangian, Pareto, Pruned };

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::Lagrangian;
  double lambda = 1.0;
  double prune_quantile = 0.5;
  std::optional<double> prune_threshold;  // overrides the quantile when set
};

// Multi-agent wrapper: the chosen single-agent search inside the shared
// conflict-resolution layer, with fixed per-agent budgets of delta_global / N
// and no reallocation. Only the Pareto method consults the per-agent budget;
// the other two encode risk pressure in their own parameter.
Solution solve_baseline(const SolveRequest& request, const BaselineConfig& config);

}  // namespace riskcbs
