// Random geometric instance generator over the unit square.
#pragma once

#include <cstdint>

#include "riskcbs/instance.hpp"

namespace riskcbs {

enum class HazardLayout {
  Random,  // hazard sources sampled uniformly
  Ridge,   // sources along the horizontal midline, tasks crossing it
};

/// Gaussian hazard field: field(p) = sum_k exp(-|p - c_k|^2 / (2 sigma^2)).
/// Edge risk is amplitude * field(edge midpoint) * edge length.
struct HazardSpec {
  int sources = 3;
  double amplitude = 1.0;
  double sigma = 0.15;
  HazardLayout layout = HazardLayout::Random;
};

struct SyntheticParams {
  std::uint64_t seed = 0;
  int n_vertices = 40;
  int n_agents = 4;
  HazardSpec hazard;
  double agent_radius = 0.04;
  // Connection radius is connect_factor * sqrt(ln(n)/n); grown on retries.
  double connect_factor = 1.6;
  // Each agent's goal must lie at least this far from its start, so routes
  // traverse enough of the square to face a real safety/length trade-off.
  double min_task_dist = 0.4;
  int max_retries = 8;
};

/// Deterministic for fixed params. dist weights are Euclidean edge lengths,
/// pair_dist is the Euclidean table, and max_dist is the connection radius.
/// Tasks get distinct starts and distinct goals, each start-goal pair
/// connected; starts (and goals) are kept mutually farther apart than the
/// disc diameter. Throws GenerationError when retries are exhausted.
Instance build_synthetic_instance(const SyntheticParams& params);

Instance build_synthetic_instance(std::uint64_t seed, int n_vertices, int n_agents,
                                  const HazardSpec& hazard);

}  // namespace riskcbs
