// Command-line front end: instance generation, budget calibration, single
// solves, and the batch benchmark protocol.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "riskcbs/baselines.hpp"
#include "riskcbs/bench.hpp"
#include "riskcbs/errors.hpp"
#include "riskcbs/instance.hpp"
#include "riskcbs/solver.hpp"
#include "riskcbs/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoSolution = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitBadInput = 4;

int exit_code_for(riskcbs::SolveStatus status) {
  switch (status) {
    case riskcbs::SolveStatus::Success: return kExitOk;
    case riskcbs::SolveStatus::NoSolution: return kExitNoSolution;
    case riskcbs::SolveStatus::Timeout: return kExitTimeout;
  }
  return kExitBadInput;
}

struct GenOptions {
  unsigned seed = 0;
  int vertices = 20;
  int agents = 4;
  std::string difficulty = "medium";
  std::string layout = "random";
  double radius = 0.04;
  std::string out;
};

int run_gen(const GenOptions& opt) {
  riskcbs::SyntheticParams params;
  params.seed = opt.seed;
  params.n_vertices = opt.vertices;
  params.n_agents = opt.agents;
  params.agent_radius = opt.radius;
  if (opt.layout == "ridge") {
    params.hazard.layout = riskcbs::HazardLayout::Ridge;
  } else if (opt.layout != "random") {
    std::cerr << "unknown layout: " << opt.layout << "\n";
    return kExitBadInput;
  }
  const auto difficulty = riskcbs::parse_difficulty(opt.difficulty);
  if (!difficulty) {
    std::cerr << "unknown difficulty: " << opt.difficulty << "\n";
    return kExitBadInput;
  }
  switch (*difficulty) {
    case riskcbs::Difficulty::Easy:
      params.hazard.amplitude = 0.6;
      params.hazard.sigma = 0.22;
      params.connect_factor = 1.9;
      break;
    case riskcbs::Difficulty::Medium: break;  // generator defaults
    case riskcbs::Difficulty::Hard:
      params.hazard.amplitude = 1.6;
      params.hazard.sigma = 0.10;
      params.connect_factor = 1.5;
      break;
  }
  try {
    const riskcbs::Instance inst = riskcbs::build_synthetic_instance(params);
    riskcbs::save_instance(inst, opt.out);
  } catch (const std::exception& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kExitBadInput;
  }
  std::cout << "wrote " << opt.out << " (" << opt.vertices << " vertices, " << opt.agents
            << " agents, seed " << opt.seed << ")\n";
  return kExitOk;
}

struct SolveOptions {
  std::string instance_path;
  std::string method = "rbcbs";
  std::string alloc = "utility";
  double risk_level = 100.0;  // percent of the calibrated interval
  std::optional<double> delta;
  double lambda = 1.0;
  double prune_quantile = 0.5;
  double timeout_scale = 1.0;
  std::optional<double> radius;
  int horizon = 0;
};

std::optional<riskcbs::AllocationStrategy> parse_alloc(const std::string& name) {
  if (name == "uniform") return riskcbs::AllocationStrategy::Uniform;
  if (name == "utility") return riskcbs::AllocationStrategy::Utility;
  if (name == "inverse") return riskcbs::AllocationStrategy::InverseUtility;
  return std::nullopt;
}

int run_solve(const SolveOptions& opt) {
  riskcbs::Instance inst;
  try {
    inst = riskcbs::load_instance(opt.instance_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot load instance: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (opt.radius) inst.radius = *opt.radius;

  const auto method = riskcbs::parse_method(opt.method);
  const auto alloc = parse_alloc(opt.alloc);
  if (!method || !alloc || opt.risk_level < 0.0 || opt.risk_level > 100.0) {
    std::cerr << "bad method/alloc/risk-level\n";
    return kExitBadInput;
  }

  double delta = 0.0;
  if (opt.delta) {
    delta = *opt.delta;
  } else {
    riskcbs::SolveStatus failure = riskcbs::SolveStatus::NoSolution;
    const auto interval =
        riskcbs::calibrate_interval(inst, opt.timeout_scale, opt.horizon, &failure);
    if (!interval) {
      std::cerr << "calibration failed\n";
      return exit_code_for(failure);
    }
    delta = riskcbs::delta_at(*interval, opt.risk_level / 100.0);
    std::printf("interval [%.6g, %.6g], level %g%% -> delta %.6g\n", interval->lower,
                interval->upper, opt.risk_level, delta);
  }

  riskcbs::SolveRequest req;
  req.graph = inst.graph;
  req.tasks = inst.tasks;
  req.delta_global = delta;
  req.allocation = *alloc;
  req.collision.radius = inst.radius;
  req.timeout_seconds = 60.0 * static_cast<double>(inst.tasks.size()) * opt.timeout_scale;
  req.horizon = opt.horizon;

  riskcbs::Solution sol;
  if (*method == riskcbs::Method::RbCbs) {
    sol = riskcbs::solve(req);
  } else {
    riskcbs::BaselineConfig bc;
    bc.method = *method == riskcbs::Method::Lagrangian ? riskcbs::BaselineMethod::Lagrangian
                : *method == riskcbs::Method::Pareto   ? riskcbs::BaselineMethod::Pareto
                                                       : riskcbs::BaselineMethod::Pruned;
    bc.lambda = opt.lambda;
    bc.prune_quantile = opt.prune_quantile;
    sol = riskcbs::solve_baseline(req, bc);
  }

  if (sol.status != riskcbs::SolveStatus::Success) {
    std::cout << (sol.status == riskcbs::SolveStatus::Timeout ? "timeout\n" : "no solution\n");
    return exit_code_for(sol.status);
  }

  const bool within = sol.total_risk <= delta + 1e-9;
  std::printf("%s: cost %lld, total risk %.6g (delta %.6g)\n", within ? "solved" : "over budget",
              static_cast<long long>(sol.cost), sol.total_risk, delta);
  for (size_t i = 0; i < sol.paths.size(); ++i) {
    std::printf("agent %d: risk %.6g", sol.paths[i].agent_id, sol.path_risks[i]);
    if (i < sol.final_budgets.size()) std::printf(" / budget %.6g", sol.final_budgets[i]);
    std::printf(", path");
    for (int v : sol.paths[i].vertices) std::printf(" %d", v);
    std::printf("\n");
  }
  std::printf("stats: ct_nodes %ld, reallocations %ld, low_level_calls %ld, wall %.3fs\n",
              sol.stats.ct_nodes_expanded, sol.stats.reallocations, sol.stats.low_level_calls,
              sol.stats.wall_seconds);
  return within ? kExitOk : kExitNoSolution;
}

struct BenchOptions {
  int count = 50;
  std::string difficulty = "medium";
  unsigned seed = 0;
  std::vector<std::string> methods;
  std::string alloc = "utility";
  std::vector<double> levels{0.0, 25.0, 50.0, 75.0, 100.0};
  double lambda = 1.0;
  double prune_quantile = 0.5;
  double timeout_scale = 1.0;
  int workers = 0;
  bool zero_timing = false;
  std::string out;
};

int run_bench(const BenchOptions& opt) {
  riskcbs::BenchConfig cfg;
  const auto difficulty = riskcbs::parse_difficulty(opt.difficulty);
  const auto alloc = parse_alloc(opt.alloc);
  if (!difficulty || !alloc) {
    std::cerr << "bad difficulty/alloc\n";
    return kExitBadInput;
  }
  if (!opt.methods.empty()) {
    cfg.methods.clear();
    for (const std::string& name : opt.methods) {
      const auto m = riskcbs::parse_method(name);
      if (!m) {
        std::cerr << "unknown method: " << name << "\n";
        return kExitBadInput;
      }
      cfg.methods.push_back(*m);
    }
  }
  cfg.levels.clear();
  for (double p : opt.levels) {
    if (p < 0.0 || p > 100.0) {
      std::cerr << "risk level out of range: " << p << "\n";
      return kExitBadInput;
    }
    cfg.levels.push_back(p / 100.0);
  }
  cfg.allocation = *alloc;
  cfg.lambda = opt.lambda;
  cfg.prune_quantile = opt.prune_quantile;
  cfg.timeout_scale = opt.timeout_scale;
  cfg.workers = opt.workers;
  cfg.zero_timing = opt.zero_timing;
  try {
    cfg.instances = riskcbs::make_benchmark_suite(opt.count, *difficulty, opt.seed);
  } catch (const std::exception& e) {
    std::cerr << "suite generation failed: " << e.what() << "\n";
    return kExitBadInput;
  }

  const riskcbs::BenchReport report = riskcbs::run_benchmark(cfg);
  const std::string csv = riskcbs::to_csv(report.records);
  if (opt.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(opt.out);
    if (!f) {
      std::cerr << "cannot write " << opt.out << "\n";
      return kExitBadInput;
    }
    f << csv;
    std::cout << "wrote " << report.records.size() << " records to " << opt.out << "\n";
  }
  std::cout << riskcbs::format_report(report.aggregates);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-bounded multi-agent path planning over waypoint graphs"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a synthetic instance file");
  cmd_gen->add_option("--seed", gen.seed, "Generator seed");
  cmd_gen->add_option("--vertices", gen.vertices, "Number of waypoints");
  cmd_gen->add_option("--agents", gen.agents, "Number of agents");
  cmd_gen->add_option("--difficulty", gen.difficulty, "easy|medium|hard");
  cmd_gen->add_option("--layout", gen.layout, "Hazard layout: random|ridge");
  cmd_gen->add_option("--radius", gen.radius, "Agent disc radius");
  cmd_gen->add_option("--out", gen.out, "Output instance path")->required();

  std::string calibrate_path;
  double calibrate_scale = 1.0;
  int calibrate_horizon = 0;
  CLI::App* cmd_cal = app.add_subcommand("calibrate", "Print the feasible risk interval");
  cmd_cal->add_option("instance", calibrate_path, "Instance file")->required();
  cmd_cal->add_option("--timeout-scale", calibrate_scale, "Deadline multiplier");
  cmd_cal->add_option("--horizon", calibrate_horizon, "Low-level horizon override");

  SolveOptions solve_opt;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Solve one instance with one method");
  cmd_solve->add_option("instance", solve_opt.instance_path, "Instance file")->required();
  cmd_solve->add_option("--method", solve_opt.method, "rbcbs|lagrangian|pareto|pruned");
  cmd_solve->add_option("--alloc", solve_opt.alloc, "uniform|utility|inverse");
  cmd_solve->add_option("--risk-level", solve_opt.risk_level, "Percent of the risk interval");
  cmd_solve->add_option("--delta", solve_opt.delta, "Absolute global budget (skips calibration)");
  cmd_solve->add_option("--lambda", solve_opt.lambda, "Scalarization weight (lagrangian)");
  cmd_solve->add_option("--prune-quantile", solve_opt.prune_quantile,
                        "Edge-risk quantile for the pruned method");
  cmd_solve->add_option("--timeout-scale", solve_opt.timeout_scale, "Deadline multiplier");
  cmd_solve->add_option("--radius", solve_opt.radius, "Override the instance's agent radius");
  cmd_solve->add_option("--horizon", solve_opt.horizon, "Low-level horizon override");

  BenchOptions bench;
  CLI::App* cmd_bench = app.add_subcommand("bench", "Run the batch benchmark protocol");
  cmd_bench->add_option("--count", bench.count, "Number of instances");
  cmd_bench->add_option("--difficulty", bench.difficulty, "easy|medium|hard");
  cmd_bench->add_option("--seed", bench.seed, "Base seed for the suite");
  cmd_bench->add_option("--method", bench.methods, "Methods to run (repeatable; default all)");
  cmd_bench->add_option("--alloc", bench.alloc, "uniform|utility|inverse");
  cmd_bench->add_option("--risk-level", bench.levels, "Percent levels (repeatable)");
  cmd_bench->add_option("--lambda", bench.lambda, "Scalarization weight (lagrangian)");
  cmd_bench->add_option("--prune-quantile", bench.prune_quantile,
                        "Edge-risk quantile for the pruned method");
  cmd_bench->add_option("--timeout-scale", bench.timeout_scale, "Deadline multiplier");
  cmd_bench->add_option("--workers", bench.workers, "Worker pool size (0 = auto)");
  cmd_bench->add_flag("--zero-timing", bench.zero_timing, "Report wall_ms as 0 (stable CSV)");
  cmd_bench->add_option("--out", bench.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  if (cmd_gen->parsed()) return run_gen(gen);
  if (cmd_cal->parsed()) {
    riskcbs::Instance inst;
    try {
      inst = riskcbs::load_instance(calibrate_path);
    } catch (const std::exception& e) {
      std::cerr << "cannot load instance: " << e.what() << "\n";
      return kExitBadInput;
    }
    riskcbs::SolveStatus failure = riskcbs::SolveStatus::NoSolution;
    const auto interval =
        riskcbs::calibrate_interval(inst, calibrate_scale, calibrate_horizon, &failure);
    if (!interval) {
      std::cerr << "calibration failed\n";
      return exit_code_for(failure);
    }
    std::printf("interval lower %.10g upper %.10g\n", interval->lower, interval->upper);
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      std::printf("level %3g%% -> delta %.10g\n", p * 100.0, riskcbs::delta_at(*interval, p));
    }
    return kExitOk;
  }
  if (cmd_solve->parsed()) return run_solve(solve_opt);
  if (cmd_bench->parsed()) return run_bench(bench);
  return kExitBadInput;
}
