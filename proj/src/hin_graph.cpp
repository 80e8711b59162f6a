#include "ggbm/hin_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ggbm {

std::optional<int> HinGraph::label(NodeId v) const {
  std::int8_t l = labels_.at(v);
  if (l < 0) return std::nullopt;
  return static_cast<int>(l);
}

NodeId HinGraph::node_id(const std::string& external) const {
  auto it = id_index_.find(external);
  if (it == id_index_.end()) throw ValidationError("graph: unknown node id '" + external + "'");
  return it->second;
}

bool HinGraph::has_node(const std::string& external) const {
  return id_index_.count(external) > 0;
}

std::span<const std::pair<NodeId, EdgeId>> HinGraph::neighbors(NodeId v) const {
  const auto& adj = adjacency_.at(v);
  return {adj.data(), adj.size()};
}

std::vector<NodeId> HinGraph::labeled_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < num_nodes(); ++v)
    if (labels_[v] >= 0) out.push_back(v);
  return out;
}

HinGraph HinGraph::relabeled(std::span<const std::int8_t> labels) const {
  if (static_cast<int>(labels.size()) != num_nodes())
    throw ValidationError("graph: label vector size does not match node count");
  HinGraph g(*this);
  for (NodeId v = 0; v < num_nodes(); ++v)
    g.labels_[v] = (labels[v] == 0 || labels[v] == 1) ? labels[v] : std::int8_t(-1);
  return g;
}

HinGraph HinGraph::with_node_feature(int feature_index, const VecD& values) const {
  if (values.size() != num_nodes())
    throw ValidationError("graph: feature vector size does not match node count");
  HinGraph g(*this);
  for (NodeId v = 0; v < num_nodes(); ++v) {
    if (feature_index >= g.node_features_[v].size())
      throw ValidationError("graph: feature index out of range for node type");
    g.node_features_[v](feature_index) = values(v);
    g.node_missing_[v](feature_index) = 0;
  }
  return g;
}

namespace {

void fill_features(const std::vector<std::optional<double>>& in, VecD& values, MaskVec& missing) {
  values.resize(static_cast<Eigen::Index>(in.size()));
  missing.resize(static_cast<Eigen::Index>(in.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (in[i].has_value()) {
      values(i) = *in[i];
      missing(i) = 0;
    } else {
      values(i) = 0.0;
      missing(i) = 1;
    }
  }
}

}  // namespace

HinGraph build_graph(const GraphSchema& schema, std::span<const NodeInput> nodes,
                     std::span<const EdgeInput> edges) {
  HinGraph g;
  g.schema_ = schema;
  g.external_ids_.reserve(nodes.size());

  for (const auto& n : nodes) {
    if (g.id_index_.count(n.id))
      throw ValidationError("graph: duplicate node id '" + n.id + "'");
    int type = schema.node_type_index(n.type);
    int arity = schema.node_type(type).arity();
    if (static_cast<int>(n.features.size()) != arity)
      throw ValidationError("graph: arity mismatch for node '" + n.id + "': type '" + n.type +
                            "' expects " + std::to_string(arity) + " features, got " +
                            std::to_string(n.features.size()));
    if (n.label && *n.label != 0 && *n.label != 1)
      throw ValidationError("graph: node '" + n.id + "': label must be 0 or 1");
    NodeId id = static_cast<NodeId>(g.external_ids_.size());
    g.id_index_.emplace(n.id, id);
    g.external_ids_.push_back(n.id);
    g.node_type_.push_back(type);
    VecD values;
    MaskVec missing;
    fill_features(n.features, values, missing);
    g.node_features_.push_back(std::move(values));
    g.node_missing_.push_back(std::move(missing));
    g.labels_.push_back(n.label ? static_cast<std::int8_t>(*n.label) : std::int8_t(-1));
  }

  g.adjacency_.resize(g.external_ids_.size());
  std::set<std::tuple<NodeId, NodeId, int>> seen_pairs;
  for (const auto& e : edges) {
    auto iu = g.id_index_.find(e.u);
    auto iv = g.id_index_.find(e.v);
    if (iu == g.id_index_.end())
      throw ValidationError("graph: dangling endpoint '" + e.u + "'");
    if (iv == g.id_index_.end())
      throw ValidationError("graph: dangling endpoint '" + e.v + "'");
    if (iu->second == iv->second)
      throw ValidationError("graph: self-loop at node '" + e.u + "'");
    int type = schema.edge_type_index(e.type);
    int arity = schema.edge_type(type).arity();
    if (static_cast<int>(e.features.size()) != arity)
      throw ValidationError("graph: arity mismatch for edge (" + e.u + ", " + e.v + "): type '" +
                            e.type + "' expects " + std::to_string(arity) + " features, got " +
                            std::to_string(e.features.size()));
    NodeId u = std::min(iu->second, iv->second);
    NodeId v = std::max(iu->second, iv->second);
    if (!seen_pairs.insert({u, v, type}).second)
      throw ValidationError("graph: duplicate edge (" + e.u + ", " + e.v + ") of type '" + e.type +
                            "'");
    HinGraph::Edge edge;
    edge.u = u;
    edge.v = v;
    edge.type = type;
    fill_features(e.features, edge.features, edge.missing);
    EdgeId id = static_cast<EdgeId>(g.edges_.size());
    g.edges_.push_back(std::move(edge));
    g.adjacency_[u].emplace_back(v, id);
    g.adjacency_[v].emplace_back(u, id);
  }

  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

bool EgoNet::contains(NodeId v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

EgoNet egonet(const HinGraph& g, NodeId head, int radius) {
  if (head < 0 || head >= g.num_nodes())
    throw ValidationError("egonet: unknown node " + std::to_string(head));
  if (radius < 0) throw ValidationError("egonet: radius must be >= 0");

  std::vector<int> dist(g.num_nodes(), -1);
  std::deque<NodeId> queue;
  dist[head] = 0;
  queue.push_back(head);
  std::vector<NodeId> nodes{head};
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    if (dist[cur] == radius) continue;
    for (const auto& [nb, eid] : g.neighbors(cur)) {
      if (dist[nb] < 0) {
        dist[nb] = dist[cur] + 1;
        nodes.push_back(nb);
        queue.push_back(nb);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());

  std::vector<EdgeId> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edge(e);
    if (dist[edge.u] >= 0 && dist[edge.v] >= 0) edges.push_back(e);
  }
  return EgoNet(g, head, radius, std::move(nodes), std::move(edges));
}

}  // namespace ggbm
