#include "riskcbs/constraints.hpp"

#include <algorithm>

namespace riskcbs {

ConstraintTable::ConstraintTable(int num_vertices, int agent_id, int goal)
    : n_(num_vertices), agent_id_(agent_id), goal_(goal) {}

void ConstraintTable::mandate(int at, int t) {
  auto [it, inserted] = mandates_.emplace(t, at);
  if (!inserted && it->second != at) consistent_ = false;
  if (forbidden_vertices_.count(vkey(at, t))) consistent_ = false;
  landmarks_.emplace_back(at, t);
  if (at != goal_) earliest_goal_time_ = std::max(earliest_goal_time_, t + 1);
}

void ConstraintTable::add(const Constraint& c) {
  if (c.agent_id != agent_id_) return;
  max_time_ = std::max(max_time_, c.timestep + (c.kind == ConstraintKind::Edge ? 1 : 0));
  if (c.kind == ConstraintKind::Vertex) {
    if (c.positive) {
      mandate(c.u, c.timestep);
    } else {
      forbidden_vertices_.insert(vkey(c.u, c.timestep));
      if (mandates_.count(c.timestep) && mandates_[c.timestep] == c.u) consistent_ = false;
      if (c.u == goal_) earliest_goal_time_ = std::max(earliest_goal_time_, c.timestep + 1);
    }
  } else {
    if (c.positive) {
      auto [it, inserted] = forced_.emplace(c.timestep, std::make_pair(c.u, c.v));
      if (!inserted && it->second != std::make_pair(c.u, c.v)) consistent_ = false;
      mandate(c.u, c.timestep);
      mandate(c.v, c.timestep + 1);
    } else {
      forbidden_edges_.insert(ekey(c.u, c.v, c.timestep));
      // A banned wait at the goal (self-edge) blocks resting there, exactly
      // like a vertex ban: arrival must land strictly after it.
      if (c.u == c.v && c.u == goal_) {
        earliest_goal_time_ = std::max(earliest_goal_time_, c.timestep + 1);
      }
    }
  }
  std::sort(landmarks_.begin(), landmarks_.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
}

void ConstraintTable::add_all(const std::vector<Constraint>& cs) {
  for (const Constraint& c : cs) add(c);
}

bool ConstraintTable::vertex_forbidden(int v, int t) const {
  return forbidden_vertices_.count(vkey(v, t)) > 0;
}

bool ConstraintTable::edge_forbidden(int u, int v, int t) const {
  return forbidden_edges_.count(ekey(u, v, t)) > 0;
}

std::optional<int> ConstraintTable::mandate_at(int t) const {
  auto it = mandates_.find(t);
  if (it == mandates_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<int, int>> ConstraintTable::forced_edge_at(int t) const {
  auto it = forced_.find(t);
  if (it == forced_.end()) return std::nullopt;
  return it->second;
}

bool ConstraintTable::satisfies(const TimedPath& path) const {
  if (!consistent_ || path.vertices.empty()) return false;
  const int last = std::max(max_time_ + 1, path.arrival());
  for (int t = 0; t <= last; ++t) {
    const int at = path.at(t);
    if (vertex_forbidden(at, t)) return false;
    if (auto m = mandate_at(t); m && *m != at) return false;
    if (t < last) {
      const int next = path.at(t + 1);
      // Waits are checked too: a self-edge constraint names a (u, u) step.
      if (edge_forbidden(at, next, t)) return false;
      if (auto f = forced_edge_at(t); f && (f->first != at || f->second != next)) return false;
    }
  }
  return true;
}

}  // namespace riskcbs
