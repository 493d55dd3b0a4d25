#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "riskcbs/graph.hpp"

namespace riskcbs {

enum class ConstraintKind { Vertex, Edge };

// A spatio-temporal restriction on one agent's motion. Negative constraints
// forbid occupying a vertex at time t (or departing along edge (u,v) at t);
// positive constraints mandate it (landmarks produced by disjoint splitting).
// An edge constraint with u == v names the wait at u over [t, t+1], so a
// whole motion segment can be pinned or banned whether or not it moves.
struct Constraint {
  int agent_id = -1;
  ConstraintKind kind = ConstraintKind::Vertex;
  int u = -1;  // the vertex, or the edge tail
  int v = -1;  // the edge head; -1 for vertex constraints
  int timestep = 0;
  bool positive = false;

  static Constraint vertex(int agent, int at, int t, bool positive = false) {
    return {agent, ConstraintKind::Vertex, at, -1, t, positive};
  }
  static Constraint edge(int agent, int from, int to, int t, bool positive = false) {
    return {agent, ConstraintKind::Edge, from, to, t, positive};
  }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Per-agent index over a constraint set, queried by the low-level search.
// Only constraints whose agent_id matches the table's agent are indexed.
class ConstraintTable {
 public:
  ConstraintTable(int num_vertices, int agent_id, int goal);

  void add(const Constraint& c);
  void add_all(const std::vector<Constraint>& cs);

  int agent_id() const { return agent_id_; }
  int goal() const { return goal_; }

  bool vertex_forbidden(int v, int t) const;
  bool edge_forbidden(int u, int v, int t) const;

  // Vertex the agent is required to occupy at time t, if any.
  std::optional<int> mandate_at(int t) const;
  // Edge the agent is required to depart along at time t, if any.
  std::optional<std::pair<int, int>> forced_edge_at(int t) const;
  // Positive (vertex, time) landmarks sorted by time, including the endpoints
  // implied by positive edge constraints.
  const std::vector<std::pair<int, int>>& landmarks() const { return landmarks_; }

  // False when two positive constraints demand different vertices at the same
  // time, or a mandated vertex is also forbidden: no path can satisfy this.
  bool consistent() const { return consistent_; }

  // Smallest arrival time from which the agent can rest at its goal forever:
  // one past the last time the goal is forbidden or the agent is required to
  // be elsewhere.
  int earliest_goal_time() const { return earliest_goal_time_; }
  // Largest timestep any indexed constraint touches.
  int max_time() const { return max_time_; }

  // Literal check that a path (with stay-at-goal semantics after arrival)
  // violates none of the indexed constraints.
  bool satisfies(const TimedPath& path) const;

 private:
  int64_t vkey(int v, int t) const { return static_cast<int64_t>(t) * n_ + v; }
  int64_t ekey(int u, int v, int t) const {
    return (static_cast<int64_t>(t) * n_ + u) * n_ + v;
  }
  void mandate(int at, int t);

  int n_;
  int agent_id_;
  int goal_;
  bool consistent_ = true;
  int earliest_goal_time_ = 0;
  int max_time_ = 0;
  std::unordered_set<int64_t> forbidden_vertices_;
  std::unordered_set<int64_t> forbidden_edges_;
  std::unordered_map<int, int> mandates_;                  // time -> vertex
  std::unordered_map<int, std::pair<int, int>> forced_;    // departure time -> edge
  std::vector<std::pair<int, int>> landmarks_;             // (vertex, time), sorted
};

}  // namespace riskcbs
