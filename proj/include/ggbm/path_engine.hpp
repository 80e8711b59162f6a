#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ggbm/hin_graph.hpp"
#include "ggbm/metapath.hpp"

namespace ggbm {

// A non-revisiting walk from a head node. Maximal by construction: it either
// reaches the schema's length cap or stops where no admissible unvisited
// continuation exists (dead_end).
struct SimplePath {
  NodeId head = 0;
  std::vector<NodeId> nodes;  // nodes.front() == head
  std::vector<EdgeId> edges;  // edges.size() == nodes.size() - 1
  bool dead_end = false;
  int length() const { return static_cast<int>(edges.size()); }
};

struct WeightedPath {
  SimplePath path;
  double weight = 1.0;
};

// Explosion guards: exceeding either cap fails loudly instead of truncating.
struct PathLimits {
  std::size_t max_paths_per_head = 1000000;
  std::size_t max_egonet_nodes = 1000000;
};

// Maximal admissible simple paths from the ego-net head, depth-first, with
// neighbors visited in ascending id order.
std::vector<SimplePath> enumerate_paths(const EgoNet& ego, const MetapathSchema& schema,
                                        const PathLimits& limits = {});

// Paths together with the probability that a non-revisiting random walker,
// moving uniformly over admissible continuations and stopping at dead ends or
// the length cap, traces exactly that path. Weights sum to 1 per head.
std::vector<WeightedPath> enumerate_weighted_paths(const EgoNet& ego, const MetapathSchema& schema,
                                                   const PathLimits& limits = {});

double path_weight(const EgoNet& ego, const SimplePath& path, const MetapathSchema& schema);

enum class SlotKind { Head, Edge, Node };

struct ColumnInfo {
  std::string name;  // H.<type>.<feat>, E<k>.<type>.<feat>, N<k>.<type>.<feat>
  SlotKind kind = SlotKind::Head;
  int level = 0;  // 0 for H, k for E<k>/N<k>
  std::string type_name;
  std::string feature_name;
  bool categorical = false;
};

// Fixed column order for featurized paths: the head block (one sub-block per
// node type in schema order), then for each step an edge block and a node
// block. Width = sum(d_t) + radius * (sum(f_r) + sum(d_t)).
class ColumnLayout {
 public:
  ColumnLayout() = default;
  static ColumnLayout build(const GraphSchema& schema, int radius);

  int width() const { return static_cast<int>(columns_.size()); }
  int radius() const { return radius_; }
  const std::vector<ColumnInfo>& columns() const { return columns_; }
  const GraphSchema& graph_schema() const { return schema_; }

  int head_offset(int node_type) const { return head_offsets_.at(node_type); }
  int edge_offset(int level, int edge_type) const;   // level in 1..radius
  int node_offset(int level, int node_type) const;

  std::uint64_t digest() const;

  std::string to_json_string() const;
  static ColumnLayout from_json_string(const std::string& text);

 private:
  GraphSchema schema_;
  int radius_ = 0;
  std::vector<ColumnInfo> columns_;
  std::vector<int> head_offsets_;
  std::vector<std::vector<int>> edge_offsets_;  // [level-1][edge_type]
  std::vector<std::vector<int>> node_offsets_;  // [level-1][node_type]
};

struct FeatureRow {
  VecD values;
  MaskVec missing;
};

// Writes the path's node/edge attributes into their type blocks; everything
// else stays missing, including whole levels past a short path's end.
FeatureRow featurize_path(const HinGraph& g, const SimplePath& path, const ColumnLayout& layout);

}  // namespace ggbm
