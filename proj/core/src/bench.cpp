#include "riskcbs/bench.hpp"

#include "riskcbs/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace riskcbs {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

SolveRequest request_for(const Instance& inst, double delta, const BenchConfig& cfg) {
  SolveRequest req;
  req.graph = inst.graph;
  req.tasks = inst.tasks;
  req.delta_global = delta;
  req.allocation = cfg.allocation;
  req.collision.radius = inst.radius;
  req.timeout_seconds = 60.0 * static_cast<double>(inst.tasks.size()) * cfg.timeout_scale;
  req.horizon = cfg.horizon;
  return req;
}

void run_pool(int workers, size_t jobs, const std::function<void(size_t)>& body) {
  if (jobs == 0) return;
  int count = workers > 0 ? workers
                          : std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
  count = static_cast<int>(std::min<size_t>(count, jobs));
  std::atomic<size_t> next{0};
  auto drain = [&] {
    for (size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
  };
  if (count <= 1) {
    drain();
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(count);
  for (int w = 0; w < count; ++w) threads.emplace_back(drain);
  for (auto& t : threads) t.join();
}

}  // namespace

std::optional<RiskInterval> calibrate_interval(const Instance& instance, double timeout_scale,
                                               int horizon, SolveStatus* failure) {
  SolveRequest req;
  req.graph = instance.graph;
  req.tasks = instance.tasks;
  req.collision.radius = instance.radius;
  req.timeout_seconds = 60.0 * static_cast<double>(instance.tasks.size()) * timeout_scale;
  req.horizon = horizon;

  const Solution shortest = solve_unbudgeted(req, CbsObjective::MinLength);
  if (shortest.status != SolveStatus::Success) {
    if (failure) *failure = shortest.status;
    return std::nullopt;
  }
  const Solution safest = solve_unbudgeted(req, CbsObjective::MinRisk);
  if (safest.status != SolveStatus::Success) {
    if (failure) *failure = safest.status;
    return std::nullopt;
  }
  return RiskInterval{safest.total_risk, shortest.total_risk};
}

double delta_at(const RiskInterval& interval, double p) {
  return interval.lower + p * (interval.upper - interval.lower);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::RbCbs: return "rbcbs";
    case Method::Lagrangian: return "lagrangian";
    case Method::Pareto: return "pareto";
    case Method::Pruned: return "pruned";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "rbcbs") return Method::RbCbs;
  if (name == "lagrangian") return Method::Lagrangian;
  if (name == "pareto") return Method::Pareto;
  if (name == "pruned") return Method::Pruned;
  return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(const std::string& name) {
  if (name == "easy") return Difficulty::Easy;
  if (name == "medium") return Difficulty::Medium;
  if (name == "hard") return Difficulty::Hard;
  return std::nullopt;
}

BenchReport run_benchmark(const BenchConfig& cfg) {
  BenchReport report;
  const size_t n_inst = cfg.instances.size();

  std::vector<std::optional<RiskInterval>> intervals(n_inst);
  run_pool(cfg.workers, n_inst, [&](size_t i) {
    intervals[i] = calibrate_interval(cfg.instances[i].second, cfg.timeout_scale, cfg.horizon);
  });

  struct Job {
    size_t inst;
    Method method;
    double level;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < n_inst; ++i) {
    for (Method m : cfg.methods) {
      for (double level : cfg.levels) jobs.push_back({i, m, level});
    }
  }
  report.records.resize(jobs.size());

  run_pool(cfg.workers, jobs.size(), [&](size_t j) {
    const Job& job = jobs[j];
    const Instance& inst = cfg.instances[job.inst].second;
    TrialRecord rec;
    rec.instance = cfg.instances[job.inst].first;
    rec.method = job.method;
    rec.level = job.level;
    if (!intervals[job.inst]) {
      report.records[j] = std::move(rec);  // uncalibratable: counted as failure
      return;
    }
    const double delta = delta_at(*intervals[job.inst], job.level);
    const SolveRequest req = request_for(inst, delta, cfg);
    Solution sol;
    if (job.method == Method::RbCbs) {
      sol = solve(req);
    } else {
      BaselineConfig bc;
      bc.method = job.method == Method::Lagrangian ? BaselineMethod::Lagrangian
                  : job.method == Method::Pareto   ? BaselineMethod::Pareto
                                                   : BaselineMethod::Pruned;
      bc.lambda = cfg.lambda;
      bc.prune_quantile = cfg.prune_quantile;
      sol = solve_baseline(req, bc);
    }
    rec.status = sol.status;
    rec.success = sol.status == SolveStatus::Success && sol.total_risk <= delta + 1e-9;
    if (sol.status == SolveStatus::Success) {
      rec.total_risk = sol.total_risk;
      rec.avg_steps = inst.tasks.empty()
                          ? 0.0
                          : static_cast<double>(sol.cost) / static_cast<double>(inst.tasks.size());
    }
    rec.wall_ms = cfg.zero_timing ? 0.0 : sol.stats.wall_seconds * 1000.0;
    rec.ct_nodes = sol.stats.ct_nodes_expanded;
    rec.reallocs = sol.stats.reallocations;
    report.records[j] = std::move(rec);
  });

  for (Method m : cfg.methods) {
    for (double level : cfg.levels) {
      AggregateRow row;
      row.method = m;
      row.level = level;
      std::vector<double> costs, steps;
      for (const TrialRecord& r : report.records) {
        if (r.method != m || r.level != level) continue;
        ++row.trials;
        if (r.success) {
          ++row.successes;
          costs.push_back(r.total_risk);
          steps.push_back(r.avg_steps);
        }
      }
      auto mean_std = [](const std::vector<double>& xs, double& mean, double& sd) {
        if (xs.empty()) return;
        double s = 0.0;
        for (double x : xs) s += x;
        mean = s / static_cast<double>(xs.size());
        double v = 0.0;
        for (double x : xs) v += (x - mean) * (x - mean);
        sd = std::sqrt(v / static_cast<double>(xs.size()));
      };
      mean_std(costs, row.mean_cost, row.std_cost);
      mean_std(steps, row.mean_steps, row.std_steps);
      report.aggregates.push_back(row);
    }
  }
  return report;
}

std::string to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "instance,method,level,success,total_risk,avg_steps,wall_ms,ct_nodes,reallocs\n";
  for (const TrialRecord& r : records) {
    out << r.instance << ',' << method_name(r.method) << ',' << fmt(r.level * 100.0) << ','
        << (r.success ? 1 : 0) << ',' << fmt(r.total_risk) << ',' << fmt(r.avg_steps) << ','
        << fmt(r.wall_ms) << ',' << r.ct_nodes << ',' << r.reallocs << '\n';
  }
  return out.str();
}

std::string format_report(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "method      level  success      cost (mean+/-std)     steps (mean+/-std)\n";
  for (const AggregateRow& row : rows) {
    char line[160];
    const double rate =
        row.trials > 0 ? 100.0 * row.successes / static_cast<double>(row.trials) : 0.0;
    std::snprintf(line, sizeof(line), "%-10s %5s%%  %5.1f%%  %10.4f +/- %-8.4f  %8.3f +/- %-8.3f\n",
                  method_name(row.method).c_str(), fmt(row.level * 100.0).c_str(), rate,
                  row.mean_cost, row.std_cost, row.mean_steps, row.std_steps);
    out << line;
  }
  return out.str();
}

std::vector<std::pair<std::string, Instance>> make_benchmark_suite(int count,
                                                                   Difficulty difficulty,
                                                                   unsigned base_seed) {
  HazardSpec hazard;
  double connect = 1.7;
  switch (difficulty) {
    case Difficulty::Easy:
      hazard.amplitude = 0.6;
      hazard.sigma = 0.22;
      connect = 1.9;
      break;
    case Difficulty::Medium:
      hazard.amplitude = 1.0;
      hazard.sigma = 0.15;
      connect = 1.7;
      break;
    case Difficulty::Hard:
      hazard.amplitude = 1.6;
      hazard.sigma = 0.10;
      connect = 1.5;
      break;
  }

  const int sizes[4] = {5, 10, 20, 40};
  std::vector<std::pair<std::string, Instance>> suite;
  suite.reserve(count);
  for (int k = 0; k < count; ++k) {
    SyntheticParams params;
    params.n_vertices = sizes[k % 4];
    params.n_agents = std::min(2 + k % 5, params.n_vertices / 2);
    params.hazard = hazard;
    params.connect_factor = connect;
    for (unsigned attempt = 0;; ++attempt) {
      params.seed = base_seed + static_cast<unsigned>(k) + attempt * 10007u;
      try {
        Instance inst = build_synthetic_instance(params);
        char id[64];
        std::snprintf(id, sizeof(id), "inst%03d_v%d_a%d_s%llu", k, params.n_vertices,
                      params.n_agents, static_cast<unsigned long long>(params.seed));
        suite.emplace_back(id, std::move(inst));
        break;
      } catch (const GenerationError&) {
        if (attempt >= 20) throw;  // deterministic reseed exhausted
      }
    }
  }
  return suite;
}

}  // namespace riskcbs
