#pragma once

#include <vector>

#include "riskcbs/graph.hpp"

namespace riskcbs {

// One agent's motion during a single timestep: from p0 at integer time t to
// p1 at t+1, linearly parameterized by tau in [0,1]. p0 == p1 encodes waiting
// (including resting at the goal after arrival).
struct MotionSegment {
  int agent_id = -1;
  int p0 = -1;
  int p1 = -1;
  int timestep = 0;
};

enum class ConflictKind { Vertex, EdgeSwap, Geometric };

struct Conflict {
  int agent_i = -1;  // always agent_i < agent_j
  int agent_j = -1;
  int timestep = 0;  // vertex: occupancy time t+1; swap/geometric: departure time t
  ConflictKind kind = ConflictKind::Vertex;
  MotionSegment seg_i, seg_j;
  double tau = 0.0;       // geometric witness: clamped minimizer
  double min_dist = 0.0;  // geometric witness: distance at tau
};

struct QuadCoeffs {
  double a = 0.0, b = 0.0, c = 0.0;
};

// Coefficients of the squared separation f(tau) = a*tau^2 + b*tau + c between
// two linearly interpolated segments, computed from pairwise distances alone
// (no coordinates needed).
QuadCoeffs quadratic_coefficients(const MotionSegment& seg_a, const MotionSegment& seg_b,
                                  const PairwiseDistances& pair_dist);

struct CollisionParams {
  double radius = 0.05;         // disc radius r; collision iff min distance <= 2r (+eps)
  double eps = 1e-9;            // absorbs floating-point noise at the threshold
  double degenerate_eps = 1e-9; // a below -this flags a non-metric distance table
};

struct SegmentCheck {
  bool collision = false;
  double tau = 0.0;
  double min_dist = 0.0;
  bool clamped_negative = false;  // f dipped below zero and was clipped
  bool degenerate = false;        // concave f from a non-metric table; endpoint fallback
};

SegmentCheck check_segment_pair(const MotionSegment& seg_a, const MotionSegment& seg_b,
                                const PairwiseDistances& pair_dist,
                                const CollisionParams& params);

// Diagnostic tallies surfaced in benchmark reports.
struct CollisionCounters {
  long clamps = 0;
  long degenerate = 0;
};

// All pairwise conflicts over the joint plan, ordered by timestep then agent
// pair. Early arrivals are padded as stationary at their goal. At most one
// conflict is reported per (segment, pair), with discrete vertex/swap checks
// taking precedence over the geometric test.
std::vector<Conflict> detect_collisions(const std::vector<TimedPath>& paths,
                                        const WaypointGraph& graph, const CollisionParams& params,
                                        CollisionCounters* counters = nullptr);

}  // namespace riskcbs
