#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "riskcbs/allocation.hpp"
#include "riskcbs/collision.hpp"
#include "riskcbs/constraints.hpp"
#include "riskcbs/graph.hpp"
#include "riskcbs/low_level.hpp"

namespace riskcbs {

struct SolveRequest {
  std::shared_ptr<const WaypointGraph> graph;
  std::vector<AgentTask> tasks;
  double delta_global = 0.0;
  // Root-risk-proportional shares keep a budget at the top of the feasible
  // interval from binding per agent, so they are the default.
  AllocationStrategy allocation = AllocationStrategy::Utility;
  CollisionParams collision;    // radius etc. for the conflict sweep
  double timeout_seconds = 0.0; // <= 0 -> 60 * N
  int horizon = 0;              // 0 -> per-search default
};

enum class SolveStatus { Success, NoSolution, Timeout };

struct SolverStats {
  long ct_nodes_expanded = 0;
  long reallocations = 0;
  long low_level_calls = 0;
  long kernel_clamps = 0;      // negative squared distances clipped to zero
  long degenerate_kernels = 0; // concave separation kernels (non-metric table)
  double wall_seconds = 0.0;
  double deadline_seconds = 0.0;  // effective per-solve timeout applied
};

struct Solution {
  SolveStatus status = SolveStatus::NoSolution;
  std::vector<TimedPath> paths;       // indexed like request.tasks
  std::vector<double> path_risks;
  double total_risk = 0.0;
  std::int64_t cost = 0;              // sum over agents of arrival time
  std::vector<double> final_budgets;  // empty for unbudgeted solves
  SolverStats stats;
};

// Constraint-tree node shared with tests via the observer hook.
struct CtNode {
  std::vector<Constraint> constraints;
  std::vector<TimedPath> paths;
  std::vector<double> budgets;
  std::vector<double> risks;
  std::vector<char> satisfied;  // path exists, respects constraints, risk within budget
  double cost = 0.0;
  int conflicts = 0;
  int changed_count = 0;  // budgets that differ from the parent node's
};

// Called for every expanded node, after budget-violation replanning.
using NodeObserver = std::function<void(const CtNode&)>;

// Risk-budgeted conflict-based search: dynamic per-agent budgets summing to
// at most delta_global, reallocation when an agent cannot meet its share, and
// disjoint splitting on the earliest conflict.
Solution solve(const SolveRequest& request, const NodeObserver& observer = {});

// Plain conflict-based search without budgets, used for calibration and as a
// scaffold for the baseline methods. MinLength plans each agent by arrival
// time and orders the tree by sum of costs; MinRisk plans each agent by
// accumulated risk and orders the tree by total risk.
enum class CbsObjective { MinLength, MinRisk };
Solution solve_unbudgeted(const SolveRequest& request, CbsObjective objective,
                          const NodeObserver& observer = {});

// Shared conflict-resolution scaffold: plans every agent with the supplied
// planner under a fixed budget vector (no reallocation). Used by the baseline
// methods; agent_planner must be deterministic.
using AgentPlanner = std::function<LowLevelResult(
    int agent_index, const ConstraintTable& table, double budget, const Deadline* deadline)>;
Solution solve_fixed_budgets(const SolveRequest& request, const std::vector<double>& budgets,
                             const AgentPlanner& agent_planner);

}  // namespace riskcbs
