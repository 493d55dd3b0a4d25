#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "riskcbs/errors.hpp"
#include "riskcbs/instance.hpp"

namespace riskcbs {
namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const char* what) {
  for (const char* key : required) {
    if (!obj.contains(key)) {
      throw ParseError(std::string(what) + ": missing field '" + key + "'");
    }
  }
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known = std::find_if(required.begin(), required.end(),
                                    [&](const char* k) { return key == k; }) != required.end() ||
                       std::find_if(optional.begin(), optional.end(),
                                    [&](const char* k) { return key == k; }) != optional.end();
    if (!known) throw ParseError(std::string(what) + ": unknown field '" + key + "'");
  }
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance is not valid JSON: ") + e.what());
  }

  try {
    require_keys(doc, {"radius", "max_dist", "vertices", "edges", "pair_dist", "agents"}, {},
                 "instance");
    const double radius = doc.at("radius").get<double>();
    const double max_dist = doc.at("max_dist").get<double>();
    if (!(radius > 0.0)) throw ParseError("radius must be positive");

    for (const char* key : {"vertices", "edges", "agents"}) {
      if (!doc.at(key).is_array()) throw ParseError(std::string(key) + " must be an array");
    }
    const auto& jverts = doc.at("vertices");
    const int n = static_cast<int>(jverts.size());
    std::vector<bool> seen(n, false);
    std::vector<Vec2> coords;
    int with_coords = 0;
    for (const auto& jv : jverts) {
      require_keys(jv, {"id"}, {"x", "y"}, "vertex");
      const int id = jv.at("id").get<int>();
      if (id < 0 || id >= n || seen[id]) {
        throw ParseError("vertex ids must be a permutation of 0.." + std::to_string(n - 1));
      }
      seen[id] = true;
      if (jv.contains("x") != jv.contains("y")) throw ParseError("vertex has x without y");
      if (jv.contains("x")) {
        coords.resize(n);
        coords[id] = {jv.at("x").get<double>(), jv.at("y").get<double>()};
        ++with_coords;
      }
    }
    if (with_coords != 0 && with_coords != n) {
      throw ParseError("coordinates must be given for all vertices or none");
    }

    WaypointGraph::Builder builder(n, max_dist);
    if (!coords.empty()) builder.set_coords(coords);

    bool euclidean = false;
    const auto& jpd = doc.at("pair_dist");
    if (jpd.is_string()) {
      if (jpd.get<std::string>() != "euclidean") {
        throw ParseError("pair_dist must be a matrix or the string \"euclidean\"");
      }
      if (coords.empty()) throw ParseError("pair_dist \"euclidean\" requires vertex coordinates");
      euclidean = true;  // builder fills the table from coordinates
    } else if (jpd.is_array()) {
      if (static_cast<int>(jpd.size()) != n) throw ParseError("pair_dist row count mismatch");
      std::vector<double> flat;
      flat.reserve(static_cast<size_t>(n) * n);
      for (const auto& row : jpd) {
        if (static_cast<int>(row.size()) != n) throw ParseError("pair_dist column count mismatch");
        for (const auto& cell : row) flat.push_back(cell.get<double>());
      }
      builder.set_pair_dist(std::make_shared<PairwiseDistances>(n, std::move(flat)));
    } else {
      throw ParseError("pair_dist must be a matrix or the string \"euclidean\"");
    }

    for (const auto& je : doc.at("edges")) {
      require_keys(je, {"u", "v", "dist", "risk"}, {}, "edge");
      builder.add_edge(je.at("u").get<int>(), je.at("v").get<int>(), je.at("dist").get<double>(),
                       je.at("risk").get<double>());
    }

    Instance instance;
    instance.graph = std::make_shared<WaypointGraph>(builder.build());
    instance.radius = radius;
    instance.euclidean_pair_dist = euclidean;

    std::vector<bool> agent_seen;
    for (const auto& ja : doc.at("agents")) {
      require_keys(ja, {"id", "start", "goal"}, {}, "agent");
      AgentTask task{ja.at("id").get<int>(), ja.at("start").get<int>(), ja.at("goal").get<int>()};
      if (task.start < 0 || task.start >= n || task.goal < 0 || task.goal >= n) {
        throw ParseError("agent endpoint out of range");
      }
      if (task.agent_id < 0) throw ParseError("agent ids must be nonnegative");
      if (task.agent_id >= static_cast<int>(agent_seen.size())) {
        agent_seen.resize(task.agent_id + 1, false);
      }
      if (agent_seen[task.agent_id]) throw ParseError("duplicate agent id");
      agent_seen[task.agent_id] = true;
      instance.tasks.push_back(task);
    }
    std::sort(instance.tasks.begin(), instance.tasks.end(),
              [](const AgentTask& a, const AgentTask& b) { return a.agent_id < b.agent_id; });
    return instance;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& instance) {
  const WaypointGraph& g = *instance.graph;
  json doc;
  doc["radius"] = instance.radius;
  doc["max_dist"] = g.max_dist();

  json jverts = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) {
    json jv{{"id", v}};
    if (g.has_coords()) {
      jv["x"] = g.coords()[v].x;
      jv["y"] = g.coords()[v].y;
    }
    jverts.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(jverts);

  json jedges = json::array();
  for (int u = 0; u < g.num_vertices(); ++u) {
    for (const Edge& e : g.out_edges(u)) {
      jedges.push_back(json{{"u", u}, {"v", e.to}, {"dist", e.dist}, {"risk", e.risk}});
    }
  }
  doc["edges"] = std::move(jedges);

  if (instance.euclidean_pair_dist && g.has_coords()) {
    doc["pair_dist"] = "euclidean";
  } else {
    json rows = json::array();
    for (int u = 0; u < g.num_vertices(); ++u) {
      json row = json::array();
      for (int v = 0; v < g.num_vertices(); ++v) row.push_back(g.pair_dist()(u, v));
      rows.push_back(std::move(row));
    }
    doc["pair_dist"] = std::move(rows);
  }

  json jagents = json::array();
  for (const AgentTask& t : instance.tasks) {
    jagents.push_back(json{{"id", t.agent_id}, {"start", t.start}, {"goal", t.goal}});
  }
  doc["agents"] = std::move(jagents);

  return doc.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << serialize_instance(instance);
}

}  // namespace riskcbs
