#include "riskcbs/collision.hpp"

#include <algorithm>
#include <cmath>

namespace riskcbs {

QuadCoeffs quadratic_coefficients(const MotionSegment& seg_a, const MotionSegment& seg_b,
                                  const PairwiseDistances& pair_dist) {
  const auto d2 = [&](int x, int y) {
    const double d = pair_dist(x, y);
    return d * d;
  };
  const int p0 = seg_a.p0, p1 = seg_a.p1, q0 = seg_b.p0, q1 = seg_b.p1;
  QuadCoeffs k;
  k.a = d2(p0, p1) + d2(q0, q1) + d2(p0, q0) + d2(p1, q1) - d2(p0, q1) - d2(p1, q0);
  k.b = d2(p1, q0) - d2(p0, p1) - 2.0 * d2(p0, q0) - d2(q0, q1) + d2(p0, q1);
  k.c = d2(p0, q0);
  return k;
}

SegmentCheck check_segment_pair(const MotionSegment& seg_a, const MotionSegment& seg_b,
                                const PairwiseDistances& pair_dist,
                                const CollisionParams& params) {
  const QuadCoeffs k = quadratic_coefficients(seg_a, seg_b, pair_dist);
  const auto f = [&](double tau) { return (k.a * tau + k.b) * tau + k.c; };

  SegmentCheck res;
  double fmin;
  if (k.a > 0.0) {
    res.tau = std::clamp(-k.b / (2.0 * k.a), 0.0, 1.0);
    fmin = f(res.tau);
  } else {
    // Linear or concave squared distance: the minimum sits at an endpoint.
    // Concave beyond tolerance means the distance table is not embeddable.
    res.degenerate = k.a < -params.degenerate_eps;
    const double f0 = f(0.0), f1 = f(1.0);
    if (f1 < f0) {
      res.tau = 1.0;
      fmin = f1;
    } else {
      res.tau = 0.0;
      fmin = f0;
    }
  }
  if (fmin < 0.0) {
    res.clamped_negative = true;
    fmin = 0.0;
  }
  res.min_dist = std::sqrt(fmin);
  res.collision = res.min_dist <= 2.0 * params.radius + params.eps;
  return res;
}

std::vector<Conflict> detect_collisions(const std::vector<TimedPath>& paths,
                                        const WaypointGraph& graph, const CollisionParams& params,
                                        CollisionCounters* counters) {
  std::vector<Conflict> out;
  const int n = static_cast<int>(paths.size());
  if (n < 2) return out;

  int makespan = 0;
  for (const TimedPath& p : paths) makespan = std::max(makespan, p.arrival());

  // Initial occupancy: two agents sharing a vertex at t = 0.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (paths[i].at(0) == paths[j].at(0)) {
        Conflict c;
        c.agent_i = paths[i].agent_id;
        c.agent_j = paths[j].agent_id;
        c.timestep = 0;
        c.kind = ConflictKind::Vertex;
        c.seg_i = {paths[i].agent_id, paths[i].at(0), paths[i].at(0), 0};
        c.seg_j = {paths[j].agent_id, paths[j].at(0), paths[j].at(0), 0};
        out.push_back(c);
      }
    }
  }

  for (int t = 0; t < makespan; ++t) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const MotionSegment si{paths[i].agent_id, paths[i].at(t), paths[i].at(t + 1), t};
        const MotionSegment sj{paths[j].agent_id, paths[j].at(t), paths[j].at(t + 1), t};
        Conflict c;
        c.agent_i = si.agent_id;
        c.agent_j = sj.agent_id;
        c.seg_i = si;
        c.seg_j = sj;
        if (si.p1 == sj.p1) {
          c.kind = ConflictKind::Vertex;
          c.timestep = t + 1;
          out.push_back(c);
        } else if (si.p0 == sj.p1 && si.p1 == sj.p0 && si.p0 != si.p1) {
          c.kind = ConflictKind::EdgeSwap;
          c.timestep = t;
          out.push_back(c);
        } else {
          const SegmentCheck chk = check_segment_pair(si, sj, graph.pair_dist(), params);
          if (counters) {
            counters->clamps += chk.clamped_negative ? 1 : 0;
            counters->degenerate += chk.degenerate ? 1 : 0;
          }
          if (chk.collision) {
            c.kind = ConflictKind::Geometric;
            c.timestep = t;
            c.tau = chk.tau;
            c.min_dist = chk.min_dist;
            out.push_back(c);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace riskcbs
