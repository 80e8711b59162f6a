#include "ggbm/schema.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ggbm {

using nlohmann::json;

GraphSchema::GraphSchema(std::vector<NodeTypeDef> node_types, std::vector<EdgeTypeDef> edge_types)
    : node_types_(std::move(node_types)), edge_types_(std::move(edge_types)) {
  check_unique();
}

void GraphSchema::check_unique() const {
  std::set<std::string> seen;
  for (const auto& t : node_types_) {
    if (!seen.insert(t.name).second)
      throw ValidationError("schema: duplicate node type '" + t.name + "'");
  }
  seen.clear();
  for (const auto& t : edge_types_) {
    if (!seen.insert(t.name).second)
      throw ValidationError("schema: duplicate edge type '" + t.name + "'");
  }
}

int GraphSchema::node_type_index(const std::string& name) const {
  for (int i = 0; i < num_node_types(); ++i)
    if (node_types_[i].name == name) return i;
  throw ValidationError("schema: unknown node type '" + name + "'");
}

int GraphSchema::edge_type_index(const std::string& name) const {
  for (int i = 0; i < num_edge_types(); ++i)
    if (edge_types_[i].name == name) return i;
  throw ValidationError("schema: unknown edge type '" + name + "'");
}

bool GraphSchema::has_node_type(const std::string& name) const {
  for (const auto& t : node_types_)
    if (t.name == name) return true;
  return false;
}

bool GraphSchema::has_edge_type(const std::string& name) const {
  for (const auto& t : edge_types_)
    if (t.name == name) return true;
  return false;
}

namespace {

json features_to_json(const std::vector<FeatureDef>& feats) {
  json arr = json::array();
  for (const auto& f : feats)
    arr.push_back({{"name", f.name}, {"kind", f.categorical ? "categorical" : "real"}});
  return arr;
}

std::vector<FeatureDef> features_from_json(const json& arr, const std::string& where) {
  std::vector<FeatureDef> out;
  for (const auto& f : arr) {
    FeatureDef def;
    def.name = f.at("name").get<std::string>();
    const std::string kind = f.value("kind", "real");
    if (kind == "categorical")
      def.categorical = true;
    else if (kind == "real")
      def.categorical = false;
    else
      throw ValidationError("schema: " + where + ": feature kind must be real|categorical, got '" + kind + "'");
    out.push_back(std::move(def));
  }
  return out;
}

}  // namespace

std::string GraphSchema::to_json_string() const {
  json j;
  j["node_types"] = json::array();
  for (const auto& t : node_types_)
    j["node_types"].push_back({{"name", t.name}, {"features", features_to_json(t.features)}});
  j["edge_types"] = json::array();
  for (const auto& t : edge_types_)
    j["edge_types"].push_back({{"name", t.name},
                               {"source_type", t.source_type},
                               {"target_type", t.target_type},
                               {"features", features_to_json(t.features)}});
  return j.dump(2);
}

GraphSchema GraphSchema::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("schema: invalid JSON: ") + e.what());
  }
  std::vector<NodeTypeDef> nodes;
  std::vector<EdgeTypeDef> edges;
  for (const auto& t : j.value("node_types", json::array())) {
    NodeTypeDef def;
    def.name = t.at("name").get<std::string>();
    def.features = features_from_json(t.value("features", json::array()), "node type " + def.name);
    nodes.push_back(std::move(def));
  }
  for (const auto& t : j.value("edge_types", json::array())) {
    EdgeTypeDef def;
    def.name = t.at("name").get<std::string>();
    def.source_type = t.value("source_type", "");
    def.target_type = t.value("target_type", "");
    def.features = features_from_json(t.value("features", json::array()), "edge type " + def.name);
    edges.push_back(std::move(def));
  }
  return GraphSchema(std::move(nodes), std::move(edges));
}

void GraphSchema::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("schema: cannot write '" + path + "'");
  out << to_json_string() << "\n";
}

GraphSchema GraphSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("schema: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

bool GraphSchema::operator==(const GraphSchema& other) const {
  return to_json_string() == other.to_json_string();
}

GraphSchema GraphSchema::homogeneous() {
  NodeTypeDef n;
  n.name = "node";
  n.features = {{"x", false}};
  EdgeTypeDef e;
  e.name = "link";
  e.source_type = "node";
  e.target_type = "node";
  return GraphSchema({n}, {e});
}

}  // namespace ggbm
