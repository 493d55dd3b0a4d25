#include "riskcbs/low_level.hpp"

#include <algorithm>
#include <unordered_map>

namespace riskcbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kUnreachable = std::numeric_limits<int>::max();
constexpr double kRiskSlack = 1e-9;  // fp slack on within-budget checks

struct Label {
  double rho = kInf;
  int pu = -1;    // parent vertex in the previous layer
  int pidx = -1;  // label index within the parent cell
};

// layer[v] holds the labels at (v, t); with dominance on, at most one.
using Layer = std::vector<std::vector<Label>>;

std::shared_ptr<const std::vector<int>> reverse_hops(const WaypointGraph& g, int target) {
  auto dist = std::make_shared<std::vector<int>>(g.num_vertices(), kUnreachable);
  std::vector<int> queue{target};
  (*dist)[target] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int u : g.in_neighbors(v)) {
      if ((*dist)[u] == kUnreachable) {
        (*dist)[u] = (*dist)[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

// Vertex sequence of the label's path prefix, reconstructed via parent links.
std::vector<int> prefix_of(const std::vector<Layer>& layers, int v, int t, int idx) {
  std::vector<int> seq(static_cast<size_t>(t) + 1);
  int cv = v, cidx = idx;
  for (int ct = t; ct >= 0; --ct) {
    seq[ct] = cv;
    const Label& lab = layers[ct][cv][cidx];
    cv = lab.pu;
    cidx = lab.pidx;
  }
  return seq;
}

// Lexicographic order between two prefixes ending in layer t.
bool prefix_less(const std::vector<Layer>& layers, int t, int va, int ia, int vb, int ib) {
  const std::vector<int> pa = prefix_of(layers, va, t, ia);
  const std::vector<int> pb = prefix_of(layers, vb, t, ib);
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

LowLevelResult run_layered(const LowLevelQuery& q, bool minimize_risk) {
  const WaypointGraph& g = *q.graph;
  const int n = g.num_vertices();
  const int start = q.task.start;
  const int goal = q.task.goal;
  const ConstraintTable* ct = q.constraints;

  LowLevelResult out;
  if (ct && !ct->consistent()) return out;  // Infeasible: contradictory landmarks

  std::shared_ptr<const std::vector<int>> h;
  if (q.seed && q.seed->goal == goal && q.seed->hops_to_goal &&
      static_cast<int>(q.seed->hops_to_goal->size()) == n) {
    h = q.seed->hops_to_goal;
  } else {
    h = reverse_hops(g, goal);
  }
  if (q.record) {
    q.record->goal = goal;
    q.record->hops_to_goal = h;
  }
  if ((*h)[start] == kUnreachable) return out;

  const int max_time = ct ? ct->max_time() : 0;
  const int horizon = q.horizon > 0 ? q.horizon : 2 * n + max_time;
  const int earliest_goal = ct ? ct->earliest_goal_time() : 0;

  // Prune labels whose risk already exceeds the budget (time mode) or the
  // best known feasible risk (risk mode with a valid hint): risk only grows.
  // The budget carries the same 1e-9 slack as every other within-budget
  // check, so a path whose risk equals the budget up to rounding survives.
  double rho_cap = minimize_risk ? kInf : q.delta + kRiskSlack;
  // Risk is nonnegative, so a budget below zero (beyond slack) admits no
  // path at all, not even the trivial start-is-goal one.
  if (rho_cap < 0.0) {
    out.status = LowLevelStatus::Infeasible;
    return out;
  }
  // Prune states that cannot reach the goal by t_ub. A valid hint path gives
  // a tighter bound than the horizon without changing the returned path.
  int t_ub = horizon;
  if (q.seed && q.seed->hint_path) {
    const TimedPath& hp = *q.seed->hint_path;
    if (!hp.vertices.empty() && hp.vertices.front() == start && hp.vertices.back() == goal &&
        hp.arrival() <= horizon && (!ct || ct->satisfies(hp))) {
      double r = kInf;
      try {
        r = path_risk(hp, g);
      } catch (const std::invalid_argument&) {
      }
      if (minimize_risk) {
        rho_cap = std::min(rho_cap, r);
      } else if (r <= q.delta + kRiskSlack) {
        t_ub = std::min(t_ub, hp.arrival());
      }
    }
  }

  if (ct && ct->vertex_forbidden(start, 0)) return out;
  if (ct) {
    if (auto m = ct->mandate_at(0); m && *m != start) return out;
  }

  std::vector<Layer> layers;
  layers.emplace_back(n);
  layers[0][start].push_back({0.0, -1, -1});

  // Hop tables toward pending landmark vertices, built on demand.
  std::unordered_map<int, std::shared_ptr<const std::vector<int>>> hops_cache;
  auto hops_to = [&](int target) -> const std::vector<int>& {
    auto it = hops_cache.find(target);
    if (it == hops_cache.end()) it = hops_cache.emplace(target, reverse_hops(g, target)).first;
    return *it->second;
  };
  const std::vector<std::pair<int, int>> no_landmarks;
  const auto& landmarks = ct ? ct->landmarks() : no_landmarks;
  size_t landmark_idx = 0;

  bool horizon_pruned = false;
  int found_t = -1, found_idx = -1;

  for (int t = 0;; ++t) {
    if (q.deadline && q.deadline->expired()) {
      out.status = LowLevelStatus::Timeout;
      return out;
    }
    const Layer& cur = layers[t];

    if (!minimize_risk && t >= earliest_goal && !cur[goal].empty()) {
      int best = 0;
      for (int i = 1; i < static_cast<int>(cur[goal].size()); ++i) {
        if (cur[goal][i].rho < cur[goal][best].rho ||
            (cur[goal][i].rho == cur[goal][best].rho &&
             prefix_less(layers, t, goal, i, goal, best))) {
          best = i;
        }
      }
      found_t = t;
      found_idx = best;
      break;
    }

    if (t == horizon) {
      horizon_pruned = true;
      break;
    }
    // Once layers repeat beyond the constrained window nothing new can
    // appear, so the search has provably converged. Edge constraints at
    // max_time still shape the transition into layer max_time+1, so the
    // earliest sound comparison is layers max_time+1 vs max_time+2.
    if (q.use_dominance && t >= max_time + 2 &&
        [&] {
          for (int v = 0; v < n; ++v) {
            if (layers[t][v].size() != layers[t - 1][v].size()) return false;
            for (size_t i = 0; i < layers[t][v].size(); ++i) {
              if (layers[t][v][i].rho != layers[t - 1][v][i].rho) return false;
            }
          }
          return true;
        }()) {
      break;
    }

    Layer next(n);
    while (landmark_idx < landmarks.size() && landmarks[landmark_idx].second < t + 1) {
      ++landmark_idx;
    }
    const std::pair<int, int>* pending =
        landmark_idx < landmarks.size() ? &landmarks[landmark_idx] : nullptr;

    auto relax = [&](int to, double rho, int pu, int pidx) {
      if ((*h)[to] == kUnreachable) return;
      if (rho > rho_cap) return;
      if (t + 1 + (*h)[to] > t_ub) {
        if (t_ub == horizon) horizon_pruned = true;
        return;
      }
      if (ct) {
        if (ct->vertex_forbidden(to, t + 1)) return;
        if (auto m = ct->mandate_at(t + 1); m && *m != to) return;
        if (pending) {
          const auto& hop = hops_to(pending->first);
          if (hop[to] == kUnreachable || t + 1 + hop[to] > pending->second) return;
        }
      }
      auto& cell = next[to];
      if (!q.use_dominance) {
        cell.push_back({rho, pu, pidx});
        return;
      }
      if (cell.empty()) {
        cell.push_back({rho, pu, pidx});
        return;
      }
      Label& curlab = cell[0];
      if (rho < curlab.rho ||
          (rho == curlab.rho && prefix_less(layers, t, pu, pidx, curlab.pu, curlab.pidx))) {
        curlab = {rho, pu, pidx};
      }
    };

    const auto forced = ct ? ct->forced_edge_at(t) : std::nullopt;
    bool produced = false;
    for (int v = 0; v < n; ++v) {
      for (int idx = 0; idx < static_cast<int>(cur[v].size()); ++idx) {
        const Label lab = cur[v][idx];
        ++out.expansions;
        if (forced) {
          if (v != forced->first) continue;
          if (forced->first == forced->second) {  // mandated wait
            if (!(ct && ct->edge_forbidden(v, v, t))) relax(v, lab.rho, v, idx);
          } else if (const Edge* e = g.find_edge(forced->first, forced->second);
                     e && !(ct && ct->edge_forbidden(v, e->to, t))) {
            relax(e->to, lab.rho + e->risk, v, idx);
          }
          continue;
        }
        if (!(ct && ct->edge_forbidden(v, v, t))) {
          relax(v, lab.rho, v, idx);  // wait in place, zero risk
        }
        for (const Edge& e : g.out_edges(v)) {
          if (ct && ct->edge_forbidden(v, e.to, t)) continue;
          relax(e.to, lab.rho + e.risk, v, idx);
        }
      }
    }
    for (int v = 0; v < n && !produced; ++v) produced = !next[v].empty();
    layers.push_back(std::move(next));
    if (!produced) break;
  }

  if (minimize_risk) {
    double best_rho = kInf;
    for (int t = earliest_goal; t < static_cast<int>(layers.size()); ++t) {
      const auto& cell = layers[t][goal];
      for (int i = 0; i < static_cast<int>(cell.size()); ++i) {
        if (cell[i].rho < best_rho ||
            (found_t == t && cell[i].rho == best_rho &&
             prefix_less(layers, t, goal, i, goal, found_idx))) {
          best_rho = cell[i].rho;
          found_t = t;
          found_idx = i;
        }
      }
    }
  }

  if (found_t < 0) {
    out.status = horizon_pruned ? LowLevelStatus::HorizonExhausted : LowLevelStatus::Infeasible;
    return out;
  }
  out.status = LowLevelStatus::Found;
  out.path = TimedPath{q.task.agent_id, prefix_of(layers, goal, found_t, found_idx)};
  out.risk = layers[found_t][goal][found_idx].rho;
  if (q.record) {
    q.record->last_path = out.path;
    q.record->has_path = true;
  }
  return out;
}

}  // namespace

LowLevelResult rba_star(const LowLevelQuery& query) { return run_layered(query, false); }

LowLevelResult min_feasible_risk(const LowLevelQuery& query) { return run_layered(query, true); }

SearchSeed warm_start(const SearchRecord& record, const ConstraintTable& new_constraints) {
  SearchSeed seed;
  seed.goal = record.goal;
  seed.hops_to_goal = record.hops_to_goal;
  if (record.has_path && new_constraints.satisfies(record.last_path)) {
    seed.hint_path = record.last_path;
  }
  return seed;
}

}  // namespace riskcbs
