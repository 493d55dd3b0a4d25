#include "riskcbs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <tuple>

#include "riskcbs/frontier.hpp"

namespace riskcbs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBudgetSlack = 1e-9;  // fp slack on the global-budget gate

enum class Mode { Budgeted, MinLength, MinRisk, FixedBudgets };

bool key_less(const FrontierKey& a, const FrontierKey& b) {
  return std::tie(a.cost, a.conflicts, a.changed) < std::tie(b.cost, b.conflicts, b.changed);
}

struct Engine {
  const SolveRequest& req;
  Mode mode;
  const NodeObserver& observer;
  const AgentPlanner* external_planner = nullptr;  // FixedBudgets only
  std::vector<double> fixed_budgets;

  const WaypointGraph& g;
  int n;
  Deadline deadline;
  SolverStats stats;
  CollisionCounters counters;
  std::vector<SearchRecord> records;

  using NodePtr = std::shared_ptr<CtNode>;
  Frontier<NodePtr> frontier;

  Engine(const SolveRequest& r, Mode m, const NodeObserver& obs)
      : req(r), mode(m), observer(obs), g(*r.graph), n(static_cast<int>(r.tasks.size())) {
    const double seconds = r.timeout_seconds > 0.0 ? r.timeout_seconds : 60.0 * n;
    deadline = Deadline::after(seconds);
    stats.deadline_seconds = seconds;
    records.resize(n);
  }

  ConstraintTable make_table(const std::vector<Constraint>& cs, int i) const {
    ConstraintTable t(g.num_vertices(), req.tasks[i].agent_id, req.tasks[i].goal);
    t.add_all(cs);
    return t;
  }

  LowLevelResult plan_agent(int i, const ConstraintTable& table, double budget) {
    ++stats.low_level_calls;
    if (external_planner) return (*external_planner)(i, table, budget, &deadline);
    SearchSeed seed = warm_start(records[i], table);
    LowLevelQuery q;
    q.graph = &g;
    q.task = req.tasks[i];
    q.constraints = &table;
    q.delta = budget;
    q.horizon = req.horizon;
    q.deadline = &deadline;
    q.seed = &seed;
    q.record = &records[i];
    return mode == Mode::MinRisk ? min_feasible_risk(q) : rba_star(q);
  }

  double node_cost(const CtNode& nd) const {
    double c = 0.0;
    if (mode == Mode::MinRisk) {
      for (double r : nd.risks) c += r;
    } else {
      for (const TimedPath& p : nd.paths) c += p.arrival();
    }
    return c;
  }

  FrontierKey key_of(const CtNode& nd) const { return {nd.cost, nd.conflicts, nd.changed_count}; }

  // Fixed-budget planners own their budget handling (or ignore it), so the
  // risk-within-budget clause only gates satisfaction in the budgeted mode.
  bool budget_gates_satisfaction() const { return mode == Mode::Budgeted; }

  void refresh_satisfied(CtNode& nd) const {
    for (int i = 0; i < n; ++i) {
      const ConstraintTable t = make_table(nd.constraints, i);
      nd.satisfied[i] = !nd.paths[i].vertices.empty() && t.satisfies(nd.paths[i]) &&
                        (!budget_gates_satisfaction() ||
                         nd.risks[i] <= nd.budgets[i] + kBudgetSlack);
    }
  }

  int count_conflicts(CtNode& nd) {
    return static_cast<int>(detect_collisions(nd.paths, g, req.collision, &counters).size());
  }

  // Minimum feasible risk per agent under the node's constraints. Fails when
  // some agent has no constraint-satisfying path at any risk.
  std::optional<std::vector<double>> all_delta_min(const CtNode& nd, bool& timed_out) {
    std::vector<double> dmin(n);
    for (int i = 0; i < n; ++i) {
      const ConstraintTable t = make_table(nd.constraints, i);
      SearchSeed seed = warm_start(records[i], t);
      LowLevelQuery q;
      q.graph = &g;
      q.task = req.tasks[i];
      q.constraints = &t;
      q.horizon = req.horizon;
      q.deadline = &deadline;
      q.seed = &seed;
      ++stats.low_level_calls;
      const LowLevelResult res = min_feasible_risk(q);
      if (res.status == LowLevelStatus::Timeout) {
        timed_out = true;
        return std::nullopt;
      }
      if (!res.feasible()) return std::nullopt;
      dmin[i] = res.risk;
    }
    return dmin;
  }

  // One reallocation round for the given failing set. Returns false when the
  // node must be pruned; sets timed_out on deadline expiry.
  bool try_reallocate(CtNode& nd, const std::vector<char>& failing, bool& timed_out) {
    auto dmin = all_delta_min(nd, timed_out);
    if (!dmin) return false;
    auto next = reallocate(nd.budgets, *dmin, failing);
    if (!next) return false;
    ++stats.reallocations;
    int changed = 0;
    for (int i = 0; i < n; ++i) changed += (*next)[i] != nd.budgets[i] ? 1 : 0;
    nd.budgets = std::move(*next);
    nd.changed_count = changed;
    refresh_satisfied(nd);
    nd.cost = node_cost(nd);
    nd.conflicts = count_conflicts(nd);
    return true;
  }

  // The split constraints for a conflict, expressed against the lower agent's
  // motion: its occupied vertex at the conflict time, or its traversed edge.
  struct SplitSpec {
    Constraint positive;                  // mandate on the chosen agent
    Constraint negative;                  // the same restriction, forbidden
    std::vector<Constraint> implied;      // negatives for everyone else
  };

  SplitSpec split_spec(const Conflict& c) const {
    SplitSpec s;
    const int k = c.agent_i;
    const MotionSegment& mk = c.seg_i;
    if (c.kind == ConflictKind::Vertex) {
      s.positive = Constraint::vertex(k, mk.p1, c.timestep, true);
      s.negative = Constraint::vertex(k, mk.p1, c.timestep, false);
    } else {
      // Swap and geometric conflicts pin the chosen agent's whole motion
      // segment; a wait is expressed as the self-edge (p0, p0).
      s.positive = Constraint::edge(k, mk.p0, mk.p1, c.timestep, true);
      s.negative = Constraint::edge(k, mk.p0, mk.p1, c.timestep, false);
    }
    for (const AgentTask& task : req.tasks) {
      const int a = task.agent_id;
      if (a == k) continue;
      if (s.positive.kind == ConstraintKind::Vertex) {
        s.implied.push_back(Constraint::vertex(a, s.positive.u, s.positive.timestep));
      } else {
        s.implied.push_back(Constraint::vertex(a, s.positive.u, s.positive.timestep));
        s.implied.push_back(Constraint::vertex(a, s.positive.v, s.positive.timestep + 1));
        if (s.positive.u != s.positive.v) {
          s.implied.push_back(
              Constraint::edge(a, s.positive.v, s.positive.u, s.positive.timestep));
        }
      }
    }
    // A geometric conflict is between two specific motion segments. The
    // positive child pins the chosen agent's segment entirely (including
    // waits, via the self-edge), so the other agent's conflicting segment
    // cannot appear in any collision-free completion: ban it explicitly.
    if (c.kind == ConflictKind::Geometric) {
      const MotionSegment& mj = c.seg_j;
      s.implied.push_back(Constraint::edge(c.agent_j, mj.p0, mj.p1, c.timestep));
    }
    return s;
  }

  int index_of_agent(int agent_id) const {
    for (int i = 0; i < n; ++i) {
      if (req.tasks[i].agent_id == agent_id) return i;
    }
    return -1;
  }

  Solution finish(SolveStatus status, const CtNode* nd) {
    Solution sol;
    sol.status = status;
    sol.stats = stats;
    sol.stats.kernel_clamps = counters.clamps;
    sol.stats.degenerate_kernels = counters.degenerate;
    if (nd) {
      sol.paths = nd->paths;
      sol.path_risks = nd->risks;
      for (double r : nd->risks) sol.total_risk += r;
      sol.cost = sum_of_costs(nd->paths);
      if (mode == Mode::Budgeted || mode == Mode::FixedBudgets) sol.final_budgets = nd->budgets;
    }
    return sol;
  }

  Solution run() {
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol = run_inner();
    sol.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  }

  Solution run_inner() {
    if (n == 0) return finish(SolveStatus::Success, nullptr);

    auto root = std::make_shared<CtNode>();
    root->paths.resize(n);
    root->risks.assign(n, 0.0);
    root->satisfied.assign(n, 1);
    for (int i = 0; i < n; ++i) {
      const ConstraintTable t = make_table(root->constraints, i);
      const double root_budget = mode == Mode::FixedBudgets ? fixed_budgets[i] : kInf;
      const LowLevelResult res = plan_agent(i, t, root_budget);
      if (res.status == LowLevelStatus::Timeout) return finish(SolveStatus::Timeout, nullptr);
      if (!res.feasible()) return finish(SolveStatus::NoSolution, nullptr);
      root->paths[i] = res.path;
      root->risks[i] = res.risk;
    }

    if (mode == Mode::Budgeted) {
      std::vector<double> utilities(n);
      for (int i = 0; i < n; ++i) {
        const double u = req.allocation == AllocationStrategy::InverseUtility
                             ? static_cast<double>(root->paths[i].arrival())
                             : root->risks[i];
        utilities[i] = std::max(u, 1e-6);
      }
      root->budgets = initial_allocation(req.allocation, req.delta_global, utilities, n);
    } else if (mode == Mode::FixedBudgets) {
      root->budgets = fixed_budgets;
    } else {
      root->budgets.assign(n, kInf);
    }
    if (budget_gates_satisfaction()) {
      for (int i = 0; i < n; ++i) {
        root->satisfied[i] = root->risks[i] <= root->budgets[i] + kBudgetSlack ? 1 : 0;
      }
    }
    root->cost = node_cost(*root);
    root->conflicts = count_conflicts(*root);
    frontier.push(key_of(*root), root);

    while (!frontier.empty()) {
      if (deadline.expired()) return finish(SolveStatus::Timeout, nullptr);
      const FrontierKey popped_key = frontier.top_key();
      NodePtr node = frontier.pop();
      ++stats.ct_nodes_expanded;

      // Re-plan agents whose budget or constraints invalidated their path.
      std::vector<char> failing(n, 0);
      bool any_fail = false;
      for (int i = 0; i < n; ++i) {
        if (node->satisfied[i]) continue;
        const ConstraintTable t = make_table(node->constraints, i);
        const LowLevelResult res = plan_agent(i, t, node->budgets[i]);
        if (res.status == LowLevelStatus::Timeout) return finish(SolveStatus::Timeout, nullptr);
        if (res.feasible()) {
          node->paths[i] = res.path;
          node->risks[i] = res.risk;
          node->satisfied[i] = 1;
        } else {
          failing[i] = 1;
          any_fail = true;
        }
      }
      if (any_fail) {
        if (mode != Mode::Budgeted) continue;  // no reallocation: prune
        bool timed_out = false;
        if (try_reallocate(*node, failing, timed_out)) {
          frontier.push(key_of(*node), node);
        } else if (timed_out) {
          return finish(SolveStatus::Timeout, nullptr);
        }
        continue;
      }

      // Delayed evaluation: replanning may have raised the node's true key
      // past other frontier entries; if so, re-queue instead of expanding.
      const std::vector<Conflict> conflicts =
          detect_collisions(node->paths, g, req.collision, &counters);
      node->conflicts = static_cast<int>(conflicts.size());
      node->cost = node_cost(*node);
      const FrontierKey true_key = key_of(*node);
      if (key_less(popped_key, true_key)) {
        frontier.push(true_key, node);
        continue;
      }

      if (observer) observer(*node);

      if (conflicts.empty()) {
        double total = 0.0;
        for (double r : node->risks) total += r;
        if (mode != Mode::Budgeted || total <= req.delta_global + kBudgetSlack) {
          return finish(SolveStatus::Success, node.get());
        }
        continue;  // unreachable when all budgets hold; defensive
      }

      const SplitSpec spec = split_spec(conflicts.front());
      const int k = index_of_agent(spec.positive.agent_id);
      for (int branch = 0; branch < 2; ++branch) {
        auto child = std::make_shared<CtNode>(*node);
        child->changed_count = 0;
        if (branch == 0) {
          child->constraints.push_back(spec.positive);
          child->constraints.insert(child->constraints.end(), spec.implied.begin(),
                                    spec.implied.end());
        } else {
          child->constraints.push_back(spec.negative);
        }

        refresh_satisfied(*child);
        if (!child->satisfied[k]) {
          // Re-plan the split agent now, as the branch invalidated its path.
          const ConstraintTable t = make_table(child->constraints, k);
          const LowLevelResult res = plan_agent(k, t, child->budgets[k]);
          if (res.status == LowLevelStatus::Timeout) return finish(SolveStatus::Timeout, nullptr);
          if (res.feasible()) {
            child->paths[k] = res.path;
            child->risks[k] = res.risk;
            child->satisfied[k] = 1;
          } else if (mode == Mode::Budgeted) {
            std::vector<char> fail_k(n, 0);
            fail_k[k] = 1;
            bool timed_out = false;
            if (!try_reallocate(*child, fail_k, timed_out)) {
              if (timed_out) return finish(SolveStatus::Timeout, nullptr);
              continue;  // prune this child
            }
            frontier.push(key_of(*child), child);
            continue;
          } else {
            continue;  // prune this child
          }
        }
        child->cost = node_cost(*child);
        child->conflicts = count_conflicts(*child);
        frontier.push(key_of(*child), child);
      }
    }
    return finish(SolveStatus::NoSolution, nullptr);
  }
};

}  // namespace

Solution solve(const SolveRequest& request, const NodeObserver& observer) {
  Engine eng(request, Mode::Budgeted, observer);
  return eng.run();
}

Solution solve_unbudgeted(const SolveRequest& request, CbsObjective objective,
                          const NodeObserver& observer) {
  Engine eng(request, objective == CbsObjective::MinLength ? Mode::MinLength : Mode::MinRisk,
             observer);
  return eng.run();
}

Solution solve_fixed_budgets(const SolveRequest& request, const std::vector<double>& budgets,
                             const AgentPlanner& agent_planner) {
  NodeObserver none;
  Engine eng(request, Mode::FixedBudgets, none);
  eng.external_planner = &agent_planner;
  eng.fixed_budgets = budgets;
  return eng.run();
}

}  // namespace riskcbs
