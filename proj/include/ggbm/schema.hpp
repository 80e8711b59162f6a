#pragma once

#include <string>
#include <vector>

#include "ggbm/types.hpp"

namespace ggbm {

struct FeatureDef {
  std::string name;
  bool categorical = false;
};

struct NodeTypeDef {
  std::string name;
  std::vector<FeatureDef> features;
  int arity() const { return static_cast<int>(features.size()); }
};

struct EdgeTypeDef {
  std::string name;
  std::string source_type;
  std::string target_type;
  std::vector<FeatureDef> features;
  int arity() const { return static_cast<int>(features.size()); }
};

// Type registry for a heterogeneous graph. Types get a dense index in
// declaration order; all lookups are by name or index.
class GraphSchema {
 public:
  GraphSchema() = default;
  GraphSchema(std::vector<NodeTypeDef> node_types, std::vector<EdgeTypeDef> edge_types);

  int num_node_types() const { return static_cast<int>(node_types_.size()); }
  int num_edge_types() const { return static_cast<int>(edge_types_.size()); }

  const NodeTypeDef& node_type(int index) const { return node_types_.at(index); }
  const EdgeTypeDef& edge_type(int index) const { return edge_types_.at(index); }
  const std::vector<NodeTypeDef>& node_types() const { return node_types_; }
  const std::vector<EdgeTypeDef>& edge_types() const { return edge_types_; }

  // Throws ValidationError for unknown names.
  int node_type_index(const std::string& name) const;
  int edge_type_index(const std::string& name) const;
  bool has_node_type(const std::string& name) const;
  bool has_edge_type(const std::string& name) const;

  std::string to_json_string() const;
  static GraphSchema from_json_string(const std::string& text);
  void save(const std::string& path) const;
  static GraphSchema load(const std::string& path);

  bool operator==(const GraphSchema& other) const;

  // Single node type ("node", one real feature "x") and one featureless edge
  // type ("link"); the shape every random-graph generator emits.
  static GraphSchema homogeneous();

 private:
  void check_unique() const;
  std::vector<NodeTypeDef> node_types_;
  std::vector<EdgeTypeDef> edge_types_;
};

}  // namespace ggbm
