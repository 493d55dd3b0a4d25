// Dual-weighted waypoint graph, agent tasks and timed paths.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace riskcbs {

/// Dense |V|x|V| table of pairwise distance estimates. Row-major; this is
/// the metric oracle the collision kernel queries, so it is stored
/// explicitly rather than recomputed from coordinates.
class PairwiseDistances {
 public:
  PairwiseDistances() = default;
  explicit PairwiseDistances(int n, double fill = 0.0)
      : n_(n), d_(static_cast<size_t>(n) * n, fill) {}
  PairwiseDistances(int n, std::vector<double> row_major);

  int size() const { return n_; }
  double operator()(int u, int v) const { return d_[static_cast<size_t>(u) * n_ + v]; }
  void set(int u, int v, double value) { d_[static_cast<size_t>(u) * n_ + v] = value; }
  const std::vector<double>& raw() const { return d_; }

  /// Checks finiteness, nonnegativity and zero diagonal. Throws on violation.
  void validate() const;

 private:
  int n_ = 0;
  std::vector<double> d_;
};

struct Edge {
  int to = -1;
  double dist = 0.0;  // traversal distance weight
  double risk = 0.0;  // traversal risk weight
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Immutable directed graph with per-edge distance and risk weights.
/// Edges whose distance estimate reaches max_dist are simply absent.
/// Safe to share across concurrent solver runs.
class WaypointGraph {
 public:
  class Builder;

  int num_vertices() const { return n_; }
  const std::vector<Edge>& out_edges(int v) const { return adj_[v]; }
  const std::vector<int>& in_neighbors(int v) const { return preds_[v]; }
  double max_dist() const { return max_dist_; }

  const PairwiseDistances& pair_dist() const { return *pair_dist_; }
  std::shared_ptr<const PairwiseDistances> shared_pair_dist() const { return pair_dist_; }

  bool has_coords() const { return !coords_.empty(); }
  const std::vector<Vec2>& coords() const { return coords_; }

  /// Returns the edge u->v if present.
  const Edge* find_edge(int u, int v) const;
  bool has_edge(int u, int v) const { return find_edge(u, v) != nullptr; }
  size_t num_edges() const;

  /// Copy with only the edges whose risk weight is <= threshold. The
  /// pairwise distance table is shared, not copied.
  WaypointGraph pruned_by_risk(double risk_threshold) const;

 private:
  friend class Builder;
  WaypointGraph() = default;

  int n_ = 0;
  double max_dist_ = 0.0;
  std::vector<std::vector<Edge>> adj_;
  std::vector<std::vector<int>> preds_;
  std::shared_ptr<const PairwiseDistances> pair_dist_;
  std::vector<Vec2> coords_;  // optional, for plotting only
};

class WaypointGraph::Builder {
 public:
  Builder(int num_vertices, double max_dist);

  /// Adds a directed edge. Throws std::invalid_argument if the edge violates
  /// a graph invariant (bad ids, negative or non-finite weights, dist >=
  /// max_dist, duplicate edge).
  Builder& add_edge(int u, int v, double dist, double risk);

  Builder& set_pair_dist(std::shared_ptr<const PairwiseDistances> table);
  Builder& set_coords(std::vector<Vec2> coords);

  /// Validates remaining invariants and produces the immutable graph.
  /// If no pair_dist table was supplied and coordinates are present, the
  /// table is filled with Euclidean distances.
  WaypointGraph build();

 private:
  int n_;
  double max_dist_;
  std::vector<std::vector<Edge>> adj_;
  std::shared_ptr<const PairwiseDistances> pair_dist_;
  std::vector<Vec2> coords_;
};

struct AgentTask {
  int agent_id = 0;
  int start = 0;
  int goal = 0;
};

/// Per-agent path indexed by unit timestep; repeated consecutive vertices
/// denote waiting. vertices.front() is the position at t=0.
struct TimedPath {
  int agent_id = 0;
  std::vector<int> vertices;

  /// Arrival timestep T. Waits before arrival count; an empty path is invalid.
  int arrival() const { return static_cast<int>(vertices.size()) - 1; }
  int at(int t) const;  // position at timestep t, stay-at-goal after arrival

  bool operator==(const TimedPath&) const = default;
};

/// Sum of risk weights over traversed (non-wait) steps. Wait steps contribute
/// zero risk. Throws std::invalid_argument if some step is not a graph edge.
double path_risk(const TimedPath& path, const WaypointGraph& graph);

/// Sum over agents of arrival timestep.
std::int64_t sum_of_costs(const std::vector<TimedPath>& paths);

/// Checks that the path starts/ends on the task endpoints and every non-wait
/// step is a graph edge. Returns an error message, or nullopt when valid.
std::optional<std::string> validate_path(const TimedPath& path, const WaypointGraph& graph,
                                         const AgentTask& task);

}  // namespace riskcbs
