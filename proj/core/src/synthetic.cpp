#include "riskcbs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "riskcbs/errors.hpp"

namespace riskcbs {
namespace {

// Portable uniform double in [0,1); std::uniform_real_distribution is
// implementation-defined, raw engine bits are not.
double next_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int next_index(std::mt19937_64& rng, int n) {
  return static_cast<int>(next_unit(rng) * n) % n;
}

double sq_dist(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::vector<Vec2> hazard_centers(const HazardSpec& hazard, std::mt19937_64& rng) {
  std::vector<Vec2> centers;
  centers.reserve(std::max(hazard.sources, 0));
  for (int k = 0; k < hazard.sources; ++k) {
    if (hazard.layout == HazardLayout::Ridge) {
      const double x =
          hazard.sources == 1 ? 0.5 : 0.15 + 0.7 * static_cast<double>(k) / (hazard.sources - 1);
      centers.push_back({x, 0.5});
    } else {
      centers.push_back({next_unit(rng), next_unit(rng)});
    }
  }
  return centers;
}

double field_at(const Vec2& p, const std::vector<Vec2>& centers, double sigma) {
  double f = 0.0;
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (const Vec2& c : centers) f += std::exp(-sq_dist(p, c) * inv);
  return f;
}

std::vector<int> undirected_components(const std::vector<Vec2>& pts, double radius) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> comp(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        if (comp[v] == -1 && sq_dist(pts[u], pts[v]) < radius * radius) {
          comp[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Samples `count` distinct vertices from `allowed` with pairwise coordinate
// separation > min_sep. When `anchors` is given, candidate i must also lie at
// least anchor_dist away from anchors[i]. Returns empty on failure.
std::vector<int> sample_separated(const std::vector<int>& allowed, const std::vector<Vec2>& pts,
                                  int count, double min_sep, std::mt19937_64& rng,
                                  const std::vector<int>* anchors = nullptr,
                                  double anchor_dist = 0.0) {
  std::vector<int> picked;
  for (int tries = 0; static_cast<int>(picked.size()) < count && tries < 200 * count; ++tries) {
    const int v = allowed[next_index(rng, static_cast<int>(allowed.size()))];
    bool ok = std::find(picked.begin(), picked.end(), v) == picked.end();
    if (ok && anchors) {
      const Vec2& a = pts[(*anchors)[picked.size()]];
      if (sq_dist(pts[v], a) < anchor_dist * anchor_dist) ok = false;
    }
    for (int w : picked) {
      if (!ok) break;
      if (sq_dist(pts[v], pts[w]) <= min_sep * min_sep) ok = false;
    }
    if (ok) picked.push_back(v);
  }
  if (static_cast<int>(picked.size()) < count) picked.clear();
  return picked;
}

}  // namespace

Instance build_synthetic_instance(const SyntheticParams& params) {
  if (params.n_vertices < 2) throw std::invalid_argument("need at least 2 vertices");
  if (params.n_agents < 1) throw std::invalid_argument("need at least 1 agent");
  if (params.n_agents * 2 > params.n_vertices) {
    throw std::invalid_argument("too many agents for the vertex count");
  }
  if (!(params.agent_radius > 0.0)) throw std::invalid_argument("agent radius must be positive");

  std::mt19937_64 rng(params.seed);
  const int n = params.n_vertices;
  double factor = params.connect_factor;

  for (int attempt = 0; attempt <= params.max_retries; ++attempt, factor *= 1.25) {
    std::vector<Vec2> pts(n);
    for (Vec2& p : pts) p = {next_unit(rng), next_unit(rng)};
    const double radius =
        std::min(1.5, factor * std::sqrt(std::log(static_cast<double>(std::max(n, 3))) / n));

    const std::vector<Vec2> centers = hazard_centers(params.hazard, rng);
    const std::vector<int> comp = undirected_components(pts, radius);

    // Task endpoints: ridge instances cross the hazard band, random ones
    // just keep endpoints separated and connected.
    std::vector<int> start_pool, goal_pool;
    for (int v = 0; v < n; ++v) {
      if (params.hazard.layout == HazardLayout::Ridge) {
        if (pts[v].y < 0.35) start_pool.push_back(v);
        if (pts[v].y > 0.65) goal_pool.push_back(v);
      } else {
        start_pool.push_back(v);
        goal_pool.push_back(v);
      }
    }
    if (static_cast<int>(start_pool.size()) < params.n_agents ||
        static_cast<int>(goal_pool.size()) < params.n_agents) {
      continue;
    }

    const double sep = 2.2 * params.agent_radius;
    std::vector<int> starts = sample_separated(start_pool, pts, params.n_agents, sep, rng);
    if (starts.empty()) continue;
    std::vector<int> goals = sample_separated(goal_pool, pts, params.n_agents, sep, rng, &starts,
                                              params.min_task_dist);
    if (goals.empty()) continue;

    bool connected = true;
    for (int i = 0; i < params.n_agents; ++i) {
      if (comp[starts[i]] != comp[goals[i]]) connected = false;
    }
    if (!connected) continue;

    WaypointGraph::Builder builder(n, radius);
    builder.set_coords(pts);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const double d = std::sqrt(sq_dist(pts[u], pts[v]));
        if (d < radius) {
          const Vec2 mid{0.5 * (pts[u].x + pts[v].x), 0.5 * (pts[u].y + pts[v].y)};
          const double risk =
              params.hazard.amplitude * field_at(mid, centers, params.hazard.sigma) * d;
          builder.add_edge(u, v, d, risk);
        }
      }
    }

    Instance instance;
    instance.graph = std::make_shared<WaypointGraph>(builder.build());
    instance.radius = params.agent_radius;
    instance.euclidean_pair_dist = true;
    for (int i = 0; i < params.n_agents; ++i) {
      instance.tasks.push_back(AgentTask{i, starts[i], goals[i]});
    }
    return instance;
  }
  throw GenerationError("could not generate a connected instance in " +
                        std::to_string(params.max_retries + 1) + " attempts (seed " +
                        std::to_string(params.seed) + ")");
}

Instance build_synthetic_instance(std::uint64_t seed, int n_vertices, int n_agents,
                                  const HazardSpec& hazard) {
  SyntheticParams params;
  params.seed = seed;
  params.n_vertices = n_vertices;
  params.n_agents = n_agents;
  params.hazard = hazard;
  return build_synthetic_instance(params);
}

}  // namespace riskcbs
