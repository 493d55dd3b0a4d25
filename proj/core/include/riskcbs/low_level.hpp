#pragma once

#include <chrono>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "riskcbs/constraints.hpp"
#include "riskcbs/graph.hpp"

namespace riskcbs {

// Cooperative wall-clock cutoff, checked between search layers.
struct Deadline {
  std::chrono::steady_clock::time_point at;
  static Deadline after(double seconds) {
    return {std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(seconds))};
  }
  bool expired() const { return std::chrono::steady_clock::now() >= at; }
};

enum class LowLevelStatus {
  Found,
  Infeasible,        // provably no constraint-satisfying path within budget
  HorizonExhausted,  // gave up at the horizon before the search stabilized
  Timeout,
};

struct LowLevelResult {
  LowLevelStatus status = LowLevelStatus::Infeasible;
  TimedPath path;        // valid only when status == Found
  double risk = 0.0;     // accumulated risk of path
  long expansions = 0;   // labels expanded, for warm-start speedup checks
  bool feasible() const { return status == LowLevelStatus::Found; }
};

// Reusable state from a previous search for the same agent and goal: the
// goal-distance heuristic and the last path found. Owned by one solve; not
// shared across threads.
struct SearchRecord {
  int goal = -1;
  std::shared_ptr<const std::vector<int>> hops_to_goal;  // reverse-BFS hop counts
  TimedPath last_path;
  bool has_path = false;
};

// Hints produced by warm_start. Must never change which path a search
// returns, only how much work it does to find it.
struct SearchSeed {
  int goal = -1;
  std::shared_ptr<const std::vector<int>> hops_to_goal;  // reused when goal matches
  std::optional<TimedPath> hint_path;  // previous path, still valid under the new constraints
};

struct LowLevelQuery {
  const WaypointGraph* graph = nullptr;
  AgentTask task;
  const ConstraintTable* constraints = nullptr;  // may be null (unconstrained)
  double delta = std::numeric_limits<double>::infinity();
  int horizon = 0;  // 0 -> 2*|V| + max constraint time
  bool use_dominance = true;
  const Deadline* deadline = nullptr;
  const SearchSeed* seed = nullptr;
  SearchRecord* record = nullptr;  // updated with heuristic table and result path
};

// Minimum-arrival-time path with accumulated risk <= delta. Ties broken by
// lower risk, then lexicographically smaller vertex sequence.
LowLevelResult rba_star(const LowLevelQuery& query);

// Minimum accumulated risk over all constraint-satisfying paths (arrival time
// as tie-break). result.risk carries the minimum; result.path realizes it.
LowLevelResult min_feasible_risk(const LowLevelQuery& query);

// Validate a previous search record against a new constraint set and package
// whatever still holds as hints for the next query.
SearchSeed warm_start(const SearchRecord& record, const ConstraintTable& new_constraints);

}  // namespace riskcbs
