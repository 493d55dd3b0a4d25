// Brute-force reference implementations and deterministic fixtures shared by
// the unit and acceptance suites. Everything here recomputes results from
// first principles (walk enumeration, literal constraint checks, dense
// sampling) so library outputs are compared against independent code paths.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "riskcbs/constraints.hpp"
#include "riskcbs/graph.hpp"
#include "riskcbs/instance.hpp"

namespace oracles {

// Position of a padded walk at time t: walks index positions per timestep and
// rest at their final vertex afterwards.
int walk_at(const std::vector<int>& walk, int t);

// Literal per-timestep check of `walk` against every constraint addressed to
// `agent`. Reimplements the constraint semantics directly from the rules
// (forbidden vertex/edge, mandated vertex, forced edge) without consulting
// ConstraintTable.
bool walk_satisfies(const std::vector<int>& walk,
                    const std::vector<riskcbs::Constraint>& constraints, int agent);

// Sum of traversed edge risks, accumulated left to right. Throws if a
// non-wait step is not an edge.
double walk_risk(const std::vector<int>& walk, const riskcbs::WaypointGraph& g);

// Arrival = first timestep from which the walk rests on `goal` through its
// end; -1 when the walk does not end parked on the goal.
int walk_arrival(const std::vector<int>& walk, int goal);

// Visits every walk of exactly `steps` moves from task.start (stay or any
// out-edge per step). For each walk that ends parked on the goal and passes
// walk_satisfies, calls fn(arrival, risk, walk).
void for_each_goal_walk(const riskcbs::WaypointGraph& g, const riskcbs::AgentTask& task,
                        const std::vector<riskcbs::Constraint>& constraints, int steps,
                        const std::function<void(int, double, const std::vector<int>&)>& fn);

// table[t] = minimum achievable risk over goal walks with arrival exactly t,
// +inf where no such walk exists. Size steps+1.
std::vector<double> min_risk_by_arrival(const riskcbs::WaypointGraph& g,
                                        const riskcbs::AgentTask& task,
                                        const std::vector<riskcbs::Constraint>& constraints,
                                        int steps);

// A small random search problem: sparse digraph, task, optional constraint
// set, and the horizon the case was sized for. Branching is capped so
// exhaustive enumeration up to `horizon` stays cheap.
struct SmallCase {
  std::shared_ptr<riskcbs::WaypointGraph> graph;
  riskcbs::AgentTask task;
  std::vector<riskcbs::Constraint> constraints;
  int horizon = 0;
};
SmallCase make_small_case(std::mt19937_64& rng, int max_vertices, int max_horizon,
                          bool with_constraints);

// Canonical 5-vertex fixture: start 0, goal 2; short risky route 0->1->2
// (2 steps, risk 10) against a long safe route 0->3->4->2 (3 steps, risk 0).
// `copies` lays out disjoint translated duplicates, one agent each.
riskcbs::Instance make_diamond(int copies = 1);

// Path-graph swap instance (two agent pairs exchanging ends): provably
// unsolvable but with an astronomically large constraint tree, so any solve
// runs until its deadline. Used to exercise timeout enforcement.
riskcbs::Instance make_corridor(int n_vertices = 12);

// Random 2-agent instance on <= max_vertices vertices with branching capped
// at 2 outgoing edges per vertex, suitable for joint-space brute force.
riskcbs::Instance make_tiny_instance(std::mt19937_64& rng, int max_vertices = 6);

// Joint-space brute force over pairs of padded walks: minimum sum of arrival
// times among pairs that are mutually collision-free (same disc-sweep
// predicate as the solver, applied per segment) and whose summed risk is
// within delta + 1e-9. Returns -1 when no such pair exists.
long long joint_optimal_cost(const riskcbs::Instance& inst, int steps, double delta);

}  // namespace oracles
