#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ggbm/schema.hpp"
#include "ggbm/types.hpp"

namespace ggbm {

// One node/edge as fed to build_graph. Features may be individually missing.
struct NodeInput {
  std::string id;
  std::string type;
  std::vector<std::optional<double>> features;
  std::optional<int> label;  // 0 or 1
};

struct EdgeInput {
  std::string u;
  std::string v;
  std::string type;
  std::vector<std::optional<double>> features;
};

// Immutable undirected typed multigraph with per-type feature spaces.
// Internal ids are dense and assigned in input order; adjacency lists are
// sorted by (neighbor, edge id) so traversals are input-order independent.
class HinGraph {
 public:
  struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    int type = 0;
    VecD features;
    MaskVec missing;
  };

  const GraphSchema& schema() const { return schema_; }
  int num_nodes() const { return static_cast<int>(node_type_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int node_type(NodeId v) const { return node_type_.at(v); }
  const VecD& node_features(NodeId v) const { return node_features_.at(v); }
  const MaskVec& node_missing(NodeId v) const { return node_missing_.at(v); }
  std::optional<int> label(NodeId v) const;
  bool has_label(NodeId v) const { return labels_.at(v) >= 0; }

  const std::string& external_id(NodeId v) const { return external_ids_.at(v); }
  NodeId node_id(const std::string& external) const;  // throws on unknown id
  bool has_node(const std::string& external) const;

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  // (neighbor, edge id) pairs, ascending by neighbor then edge id.
  std::span<const std::pair<NodeId, EdgeId>> neighbors(NodeId v) const;

  std::vector<NodeId> labeled_nodes() const;

  // Copy with labels replaced (values outside {0,1} clear the label).
  HinGraph relabeled(std::span<const std::int8_t> labels) const;
  // Copy with the single homogeneous feature column replaced.
  HinGraph with_node_feature(int feature_index, const VecD& values) const;

  friend HinGraph build_graph(const GraphSchema& schema, std::span<const NodeInput> nodes,
                              std::span<const EdgeInput> edges);

 private:
  GraphSchema schema_;
  std::vector<std::string> external_ids_;
  std::unordered_map<std::string, NodeId> id_index_;
  std::vector<int> node_type_;
  std::vector<VecD> node_features_;
  std::vector<MaskVec> node_missing_;
  std::vector<std::int8_t> labels_;  // -1 unknown
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> adjacency_;
};

HinGraph build_graph(const GraphSchema& schema, std::span<const NodeInput> nodes,
                     std::span<const EdgeInput> edges);

// Geodesic ball around a head node together with all induced edges.
class EgoNet {
 public:
  EgoNet(const HinGraph& graph, NodeId head, int radius, std::vector<NodeId> nodes,
         std::vector<EdgeId> edges)
      : graph_(&graph), head_(head), radius_(radius), nodes_(std::move(nodes)),
        edges_(std::move(edges)) {}

  const HinGraph& graph() const { return *graph_; }
  NodeId head() const { return head_; }
  int radius() const { return radius_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }  // ascending
  const std::vector<EdgeId>& edges() const { return edges_; }  // ascending
  bool contains(NodeId v) const;

 private:
  const HinGraph* graph_;
  NodeId head_;
  int radius_;
  std::vector<NodeId> nodes_;
  std::vector<EdgeId> edges_;
};

EgoNet egonet(const HinGraph& g, NodeId head, int radius);

}  // namespace ggbm
