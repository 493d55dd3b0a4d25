#include "riskcbs/baselines.hpp"

#include <algorithm>

namespace riskcbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kUnreachable = std::numeric_limits<int>::max();

struct Cell {
  double rho = kInf;
  int pu = -1;
};

struct RiskLayers {
  LowLevelStatus status = LowLevelStatus::Infeasible;  // Found: table complete
  std::vector<std::vector<Cell>> layer;                // [t][v] min risk + parent
  int earliest_goal = 0;
};

std::vector<int> forward_unreachable(const WaypointGraph& g, int goal) {
  std::vector<int> hops(g.num_vertices(), kUnreachable);
  std::vector<int> queue{goal};
  hops[goal] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int u : g.in_neighbors(v)) {
      if (hops[u] == kUnreachable) {
        hops[u] = hops[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return hops;
}

std::vector<int> unwind(const RiskLayers& table, int v, int t) {
  std::vector<int> seq(static_cast<size_t>(t) + 1);
  int cv = v;
  for (int ct = t; ct >= 0; --ct) {
    seq[ct] = cv;
    cv = table.layer[ct][cv].pu;
  }
  return seq;
}

bool unwind_less(const RiskLayers& table, int t, int va, int vb) {
  const std::vector<int> pa = unwind(table, va, t);
  const std::vector<int> pb = unwind(table, vb, t);
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

// Per-(vertex, timestep) minimum accumulated risk, run to convergence or the
// horizon. This is the common engine behind the scalarized and bi-objective
// baselines; it deliberately shares no code with the budgeted planner so the
// two can cross-check each other in tests.
RiskLayers build_risk_layers(const WaypointGraph& g, const AgentTask& task,
                             const ConstraintTable* ct, int horizon, const Deadline* deadline) {
  RiskLayers out;
  const int n = g.num_vertices();
  if (ct && !ct->consistent()) return out;
  const std::vector<int> hops = forward_unreachable(g, task.goal);
  if (hops[task.start] == kUnreachable) return out;

  const int max_time = ct ? ct->max_time() : 0;
  const int cap = horizon > 0 ? horizon : 2 * n + max_time;
  out.earliest_goal = ct ? ct->earliest_goal_time() : 0;

  if (ct && ct->vertex_forbidden(task.start, 0)) return out;
  if (ct) {
    if (auto m = ct->mandate_at(0); m && *m != task.start) return out;
  }

  out.layer.emplace_back(n);
  out.layer[0][task.start] = {0.0, -1};

  for (int t = 0; t < cap; ++t) {
    if (deadline && deadline->expired()) {
      out.status = LowLevelStatus::Timeout;
      return out;
    }
    if (t >= max_time + 1) {
      bool same = true;
      for (int v = 0; v < n && same; ++v) {
        same = out.layer[t][v].rho == out.layer[t - 1][v].rho;
      }
      if (same) {
        out.status = LowLevelStatus::Found;
        return out;
      }
    }
    std::vector<Cell> next(n);
    const auto forced = ct ? ct->forced_edge_at(t) : std::nullopt;
    auto relax = [&](int to, double rho, int pu) {
      if (hops[to] == kUnreachable) return;
      if (t + 1 + hops[to] > cap) return;
      if (ct) {
        if (ct->vertex_forbidden(to, t + 1)) return;
        if (auto m = ct->mandate_at(t + 1); m && *m != to) return;
      }
      Cell& cell = next[to];
      if (rho < cell.rho || (rho == cell.rho && cell.pu >= 0 && pu != cell.pu &&
                             unwind_less(out, t, pu, cell.pu))) {
        cell = {rho, pu};
      }
    };
    for (int v = 0; v < n; ++v) {
      const Cell cur = out.layer[t][v];
      if (cur.rho == kInf) continue;
      if (forced) {
        if (v != forced->first) continue;
        if (const Edge* e = g.find_edge(forced->first, forced->second);
            e && !(ct && ct->edge_forbidden(v, e->to, t))) {
          relax(e->to, cur.rho + e->risk, v);
        }
        continue;
      }
      relax(v, cur.rho, v);
      for (const Edge& e : g.out_edges(v)) {
        if (ct && ct->edge_forbidden(v, e.to, t)) continue;
        relax(e.to, cur.rho + e.risk, v);
      }
    }
    out.layer.push_back(std::move(next));
  }
  out.status = LowLevelStatus::HorizonExhausted;
  return out;
}

}  // namespace

LowLevelResult lagrangian_search(const WaypointGraph& graph, const AgentTask& task,
                                 const ConstraintTable* constraints, double lambda, int horizon,
                                 const Deadline* deadline) {
  LowLevelResult out;
  const RiskLayers table = build_risk_layers(graph, task, constraints, horizon, deadline);
  if (table.status == LowLevelStatus::Timeout) {
    out.status = LowLevelStatus::Timeout;
    return out;
  }
  double best_value = kInf;
  int best_t = -1;
  for (int t = table.earliest_goal; t < static_cast<int>(table.layer.size()); ++t) {
    const double rho = table.layer[t][task.goal].rho;
    if (rho == kInf) continue;
    const double value = t + lambda * rho;
    if (value < best_value) {
      best_value = value;
      best_t = t;
    }
  }
  if (best_t < 0) {
    out.status = table.status == LowLevelStatus::HorizonExhausted
                     ? LowLevelStatus::HorizonExhausted
                     : LowLevelStatus::Infeasible;
    return out;
  }
  out.status = LowLevelStatus::Found;
  out.path = TimedPath{task.agent_id, unwind(table, task.goal, best_t)};
  out.risk = table.layer[best_t][task.goal].rho;
  return out;
}

ParetoResult pareto_search(const WaypointGraph& graph, const AgentTask& task,
                           const ConstraintTable* constraints, int horizon,
                           const Deadline* deadline) {
  ParetoResult out;
  const RiskLayers table = build_risk_layers(graph, task, constraints, horizon, deadline);
  if (table.status == LowLevelStatus::Timeout) {
    out.status = LowLevelStatus::Timeout;
    return out;
  }
  double best_rho = kInf;
  for (int t = table.earliest_goal; t < static_cast<int>(table.layer.size()); ++t) {
    const double rho = table.layer[t][task.goal].rho;
    if (rho == kInf || rho >= best_rho) continue;  // dominated by a shorter arrival
    out.frontier.push_back({t, rho, TimedPath{task.agent_id, unwind(table, task.goal, t)}});
    best_rho = rho;
  }
  if (!out.frontier.empty()) {
    out.status = LowLevelStatus::Found;
  } else if (table.status == LowLevelStatus::HorizonExhausted) {
    out.status = LowLevelStatus::HorizonExhausted;
  }
  return out;
}

std::optional<ParetoPoint> select_within_budget(const std::vector<ParetoPoint>& frontier,
                                                double budget) {
  for (const ParetoPoint& p : frontier) {  // ascending length
    if (p.risk <= budget) return p;
  }
  return std::nullopt;
}

LowLevelResult pruned_graph_search(const WaypointGraph& graph, const AgentTask& task,
                                   const ConstraintTable* constraints,
                                   double edge_risk_threshold, int horizon,
                                   const Deadline* deadline) {
  const WaypointGraph pruned = graph.pruned_by_risk(edge_risk_threshold);
  LowLevelQuery q;
  q.graph = &pruned;
  q.task = task;
  q.constraints = constraints;
  q.horizon = horizon;
  q.deadline = deadline;
  return rba_star(q);
}

double risk_quantile(const WaypointGraph& graph, double q) {
  std::vector<double> risks;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    for (const Edge& e : graph.out_edges(v)) risks.push_back(e.risk);
  }
  if (risks.empty()) return 0.0;
  std::sort(risks.begin(), risks.end());
  const double clamped = std::clamp(q, 0.0, 1.0);
  const size_t idx = std::min(risks.size() - 1, static_cast<size_t>(clamped * risks.size()));
  return risks[idx];
}

Solution solve_baseline(const SolveRequest& request, const BaselineConfig& config) {
  const int n = static_cast<int>(request.tasks.size());
  const std::vector<double> budgets =
      n > 0 ? initial_allocation(AllocationStrategy::Uniform, request.delta_global, {}, n)
            : std::vector<double>{};

  AgentPlanner planner;
  switch (config.method) {
    case BaselineMethod::Lagrangian:
      planner = [&request, lambda = config.lambda](int i, const ConstraintTable& table,
                                                   double /*budget*/, const Deadline* deadline) {
        return lagrangian_search(*request.graph, request.tasks[i], &table, lambda,
                                 request.horizon, deadline);
      };
      break;
    case BaselineMethod::Pareto:
      planner = [&request](int i, const ConstraintTable& table, double budget,
                           const Deadline* deadline) {
        const ParetoResult pr =
            pareto_search(*request.graph, request.tasks[i], &table, request.horizon, deadline);
        LowLevelResult res;
        if (pr.status == LowLevelStatus::Timeout) {
          res.status = LowLevelStatus::Timeout;
          return res;
        }
        if (const auto pick = select_within_budget(pr.frontier, budget)) {
          res.status = LowLevelStatus::Found;
          res.path = pick->path;
          res.risk = pick->risk;
        } else {
          res.status = pr.status == LowLevelStatus::HorizonExhausted
                           ? LowLevelStatus::HorizonExhausted
                           : LowLevelStatus::Infeasible;
        }
        return res;
      };
      break;
    case BaselineMethod::Pruned: {
      const double threshold =
          config.prune_threshold.value_or(risk_quantile(*request.graph, config.prune_quantile));
      auto pruned = std::make_shared<WaypointGraph>(request.graph->pruned_by_risk(threshold));
      planner = [&request, pruned](int i, const ConstraintTable& table, double /*budget*/,
                                   const Deadline* deadline) {
        LowLevelQuery q;
        q.graph = pruned.get();
        q.task = request.tasks[i];
        q.constraints = &table;
        q.horizon = request.horizon;
        q.deadline = deadline;
        return rba_star(q);
      };
      break;
    }
  }
  return solve_fixed_budgets(request, budgets, planner);
}

}  // namespace riskcbs
