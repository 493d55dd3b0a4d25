// Problem instance: graph + tasks + agent radius, with file round-trip.
#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "riskcbs/graph.hpp"

namespace riskcbs {

struct Instance {
  std::shared_ptr<const WaypointGraph> graph;
  std::vector<AgentTask> tasks;
  double radius = 0.05;
  // Serialization marker: when true the file stores "euclidean" instead of a
  // dense pair_dist matrix (requires vertex coordinates).
  bool euclidean_pair_dist = false;
};

/// Parses the JSON instance format described in docs/instance_format.md.
/// Throws ParseError on malformed input or invariant violations.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Serializes to the same format; parse(serialize(x)) is lossless.
std::string serialize_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace riskcbs
