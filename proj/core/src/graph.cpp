#include "riskcbs/graph.hpp"

#include <algorithm>
#include <cmath>

namespace riskcbs {

PairwiseDistances::PairwiseDistances(int n, std::vector<double> row_major)
    : n_(n), d_(std::move(row_major)) {
  if (d_.size() != static_cast<size_t>(n) * n) {
    throw std::invalid_argument("pair_dist: expected " + std::to_string(n) + "x" +
                                std::to_string(n) + " entries, got " + std::to_string(d_.size()));
  }
}

void PairwiseDistances::validate() const {
  for (int u = 0; u < n_; ++u) {
    for (int v = 0; v < n_; ++v) {
      const double d = (*this)(u, v);
      if (!std::isfinite(d) || d < 0.0) {
        throw std::invalid_argument("pair_dist(" + std::to_string(u) + "," + std::to_string(v) +
                                    ") must be finite and nonnegative");
      }
    }
    if ((*this)(u, u) != 0.0) {
      throw std::invalid_argument("pair_dist(" + std::to_string(u) + "," + std::to_string(u) +
                                  ") must be zero");
    }
  }
}

WaypointGraph::Builder::Builder(int num_vertices, double max_dist)
    : n_(num_vertices), max_dist_(max_dist), adj_(num_vertices) {
  if (num_vertices < 0) throw std::invalid_argument("negative vertex count");
  if (!(max_dist > 0.0) || !std::isfinite(max_dist)) {
    throw std::invalid_argument("max_dist must be positive and finite");
  }
}

WaypointGraph::Builder& WaypointGraph::Builder::add_edge(int u, int v, double dist, double risk) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (u == v) throw std::invalid_argument("self-loop edges are not allowed");
  if (!std::isfinite(dist) || dist < 0.0 || !std::isfinite(risk) || risk < 0.0) {
    throw std::invalid_argument("edge weights must be finite and nonnegative");
  }
  if (dist >= max_dist_) {
    throw std::invalid_argument("edge distance " + std::to_string(dist) +
                                " is not below max_dist " + std::to_string(max_dist_));
  }
  for (const Edge& e : adj_[u]) {
    if (e.to == v) throw std::invalid_argument("duplicate edge");
  }
  adj_[u].push_back(Edge{v, dist, risk});
  return *this;
}

WaypointGraph::Builder& WaypointGraph::Builder::set_pair_dist(
    std::shared_ptr<const PairwiseDistances> table) {
  pair_dist_ = std::move(table);
  return *this;
}

WaypointGraph::Builder& WaypointGraph::Builder::set_coords(std::vector<Vec2> coords) {
  coords_ = std::move(coords);
  return *this;
}

WaypointGraph WaypointGraph::Builder::build() {
  if (!coords_.empty() && static_cast<int>(coords_.size()) != n_) {
    throw std::invalid_argument("coordinate count does not match vertex count");
  }
  if (!pair_dist_) {
    if (coords_.empty()) throw std::invalid_argument("no pair_dist table and no coordinates");
    auto table = std::make_shared<PairwiseDistances>(n_);
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        table->set(u, v, std::hypot(coords_[u].x - coords_[v].x, coords_[u].y - coords_[v].y));
      }
    }
    pair_dist_ = std::move(table);
  }
  if (pair_dist_->size() != n_) {
    throw std::invalid_argument("pair_dist size does not match vertex count");
  }
  pair_dist_->validate();

  WaypointGraph g;
  g.n_ = n_;
  g.max_dist_ = max_dist_;
  g.adj_ = std::move(adj_);
  g.pair_dist_ = std::move(pair_dist_);
  g.coords_ = std::move(coords_);
  for (auto& edges : g.adj_) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
  }
  g.preds_.assign(g.n_, {});
  for (int u = 0; u < g.n_; ++u) {
    for (const Edge& e : g.adj_[u]) g.preds_[e.to].push_back(u);
  }
  return g;
}

const Edge* WaypointGraph::find_edge(int u, int v) const {
  const auto& edges = adj_[u];
  auto it = std::lower_bound(edges.begin(), edges.end(), v,
                             [](const Edge& e, int target) { return e.to < target; });
  if (it != edges.end() && it->to == v) return &*it;
  return nullptr;
}

size_t WaypointGraph::num_edges() const {
  size_t m = 0;
  for (const auto& edges : adj_) m += edges.size();
  return m;
}

WaypointGraph WaypointGraph::pruned_by_risk(double risk_threshold) const {
  WaypointGraph g;
  g.n_ = n_;
  g.max_dist_ = max_dist_;
  g.pair_dist_ = pair_dist_;
  g.coords_ = coords_;
  g.adj_.assign(n_, {});
  for (int u = 0; u < n_; ++u) {
    for (const Edge& e : adj_[u]) {
      if (e.risk <= risk_threshold) g.adj_[u].push_back(e);
    }
  }
  g.preds_.assign(n_, {});
  for (int u = 0; u < n_; ++u) {
    for (const Edge& e : g.adj_[u]) g.preds_[e.to].push_back(u);
  }
  return g;
}

int TimedPath::at(int t) const {
  if (t < 0 || vertices.empty()) throw std::out_of_range("timestep out of range");
  if (t >= static_cast<int>(vertices.size())) return vertices.back();
  return vertices[t];
}

double path_risk(const TimedPath& path, const WaypointGraph& graph) {
  double risk = 0.0;
  for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const int u = path.vertices[i];
    const int v = path.vertices[i + 1];
    if (u == v) continue;  // wait step, zero risk
    const Edge* e = graph.find_edge(u, v);
    if (e == nullptr) {
      throw std::invalid_argument("path step " + std::to_string(u) + "->" + std::to_string(v) +
                                  " is not a graph edge");
    }
    risk += e->risk;
  }
  return risk;
}

std::int64_t sum_of_costs(const std::vector<TimedPath>& paths) {
  std::int64_t total = 0;
  for (const TimedPath& p : paths) total += p.arrival();
  return total;
}

std::optional<std::string> validate_path(const TimedPath& path, const WaypointGraph& graph,
                                         const AgentTask& task) {
  if (path.vertices.empty()) return "path is empty";
  if (path.vertices.front() != task.start) return "path does not start at the task start";
  if (path.vertices.back() != task.goal) return "path does not end at the task goal";
  for (size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const int u = path.vertices[i];
    const int v = path.vertices[i + 1];
    if (u < 0 || u >= graph.num_vertices() || v < 0 || v >= graph.num_vertices()) {
      return "path vertex out of range";
    }
    if (u != v && !graph.has_edge(u, v)) {
      return "step " + std::to_string(u) + "->" + std::to_string(v) + " is not an edge";
    }
  }
  return std::nullopt;
}

}  // namespace riskcbs
