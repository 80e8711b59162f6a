#include "ggbm/path_engine.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

namespace ggbm {

using nlohmann::json;

namespace {

struct DfsState {
  const EgoNet* ego;
  const HinGraph* g;
  const ResolvedMetapaths* meta;
  const PathLimits* limits;
  std::vector<WeightedPath>* out;
  std::unordered_set<NodeId> visited;
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

void dfs(DfsState& st, NodeId current, const std::vector<int>& active, double weight) {
  const int steps = static_cast<int>(st.edges.size());
  std::vector<std::pair<NodeId, EdgeId>> continuations;
  if (steps < st.meta->max_length()) {
    for (const auto& [nb, eid] : st.g->neighbors(current)) {
      if (!st.ego->contains(nb)) continue;
      if (st.visited.count(nb)) continue;
      if (!st.meta->can_extend(active, steps, st.g->edge(eid).type, st.g->node_type(nb))) continue;
      continuations.emplace_back(nb, eid);
    }
  }

  if (continuations.empty()) {
    if (st.out->size() >= st.limits->max_paths_per_head)
      throw ValidationError("paths: per-head path cap of " +
                            std::to_string(st.limits->max_paths_per_head) + " exceeded at head " +
                            std::to_string(st.nodes.front()));
    WeightedPath wp;
    wp.path.head = st.nodes.front();
    wp.path.nodes = st.nodes;
    wp.path.edges = st.edges;
    wp.path.dead_end = steps < st.meta->max_length();
    wp.weight = weight;
    st.out->push_back(std::move(wp));
    return;
  }

  const double step_prob = weight / static_cast<double>(continuations.size());
  for (const auto& [nb, eid] : continuations) {
    st.visited.insert(nb);
    st.nodes.push_back(nb);
    st.edges.push_back(eid);
    dfs(st, nb, st.meta->extended(active, steps, st.g->edge(eid).type, st.g->node_type(nb)),
        step_prob);
    st.visited.erase(nb);
    st.nodes.pop_back();
    st.edges.pop_back();
  }
}

}  // namespace

std::vector<WeightedPath> enumerate_weighted_paths(const EgoNet& ego, const MetapathSchema& schema,
                                                   const PathLimits& limits) {
  if (ego.nodes().size() > limits.max_egonet_nodes)
    throw ValidationError("paths: ego-net node cap of " + std::to_string(limits.max_egonet_nodes) +
                          " exceeded at head " + std::to_string(ego.head()));
  const HinGraph& g = ego.graph();
  ResolvedMetapaths meta(schema, g.schema());
  std::vector<WeightedPath> out;
  DfsState st{&ego, &g, &meta, &limits, &out, {}, {}, {}};
  st.visited.insert(ego.head());
  st.nodes.push_back(ego.head());
  dfs(st, ego.head(), meta.start(g.node_type(ego.head())), 1.0);
  return out;
}

std::vector<SimplePath> enumerate_paths(const EgoNet& ego, const MetapathSchema& schema,
                                        const PathLimits& limits) {
  auto weighted = enumerate_weighted_paths(ego, schema, limits);
  std::vector<SimplePath> out;
  out.reserve(weighted.size());
  for (auto& wp : weighted) out.push_back(std::move(wp.path));
  return out;
}

double path_weight(const EgoNet& ego, const SimplePath& path, const MetapathSchema& schema) {
  const HinGraph& g = ego.graph();
  if (path.nodes.empty() || path.nodes.front() != ego.head() ||
      path.edges.size() + 1 != path.nodes.size())
    throw ValidationError("paths: path inconsistent with ego-net");
  ResolvedMetapaths meta(schema, g.schema());

  std::unordered_set<NodeId> visited{path.nodes.front()};
  std::vector<int> active = meta.start(g.node_type(path.nodes.front()));
  double weight = 1.0;
  for (std::size_t step = 0; step < path.edges.size(); ++step) {
    NodeId current = path.nodes[step];
    NodeId next = path.nodes[step + 1];
    EdgeId eid = path.edges[step];
    const auto& e = g.edge(eid);
    if (!((e.u == current && e.v == next) || (e.v == current && e.u == next)))
      throw ValidationError("paths: path inconsistent with ego-net");

    int count = 0;
    bool taken_found = false;
    for (const auto& [nb, cand] : g.neighbors(current)) {
      if (!ego.contains(nb) || visited.count(nb)) continue;
      if (!meta.can_extend(active, static_cast<int>(step), g.edge(cand).type, g.node_type(nb)))
        continue;
      ++count;
      if (cand == eid && nb == next) taken_found = true;
    }
    if (!taken_found) throw ValidationError("paths: path inconsistent with ego-net");
    weight /= static_cast<double>(count);
    active = meta.extended(active, static_cast<int>(step), e.type, g.node_type(next));
    visited.insert(next);
  }
  return weight;
}

ColumnLayout ColumnLayout::build(const GraphSchema& schema, int radius) {
  if (radius < 0) throw ValidationError("layout: radius must be >= 0");
  ColumnLayout layout;
  layout.schema_ = schema;
  layout.radius_ = radius;

  auto add_block = [&layout](SlotKind kind, int level, const std::string& slot_label,
                             const std::string& type_name, const std::vector<FeatureDef>& feats) {
    int offset = layout.width();
    for (const auto& f : feats) {
      ColumnInfo col;
      col.name = slot_label + "." + type_name + "." + f.name;
      col.kind = kind;
      col.level = level;
      col.type_name = type_name;
      col.feature_name = f.name;
      col.categorical = f.categorical;
      layout.columns_.push_back(std::move(col));
    }
    return offset;
  };

  for (int t = 0; t < schema.num_node_types(); ++t)
    layout.head_offsets_.push_back(
        add_block(SlotKind::Head, 0, "H", schema.node_type(t).name, schema.node_type(t).features));

  layout.edge_offsets_.resize(radius);
  layout.node_offsets_.resize(radius);
  for (int k = 1; k <= radius; ++k) {
    for (int t = 0; t < schema.num_edge_types(); ++t)
      layout.edge_offsets_[k - 1].push_back(add_block(SlotKind::Edge, k, "E" + std::to_string(k),
                                                      schema.edge_type(t).name,
                                                      schema.edge_type(t).features));
    for (int t = 0; t < schema.num_node_types(); ++t)
      layout.node_offsets_[k - 1].push_back(add_block(SlotKind::Node, k, "N" + std::to_string(k),
                                                      schema.node_type(t).name,
                                                      schema.node_type(t).features));
  }
  return layout;
}

int ColumnLayout::edge_offset(int level, int edge_type) const {
  return edge_offsets_.at(level - 1).at(edge_type);
}

int ColumnLayout::node_offset(int level, int node_type) const {
  return node_offsets_.at(level - 1).at(node_type);
}

std::uint64_t ColumnLayout::digest() const {
  std::string acc = "radius=" + std::to_string(radius_) + ";";
  for (const auto& c : columns_) {
    acc += c.name;
    acc += c.categorical ? "#c;" : "#r;";
  }
  return fnv1a64(acc);
}

std::string ColumnLayout::to_json_string() const {
  json j;
  j["radius"] = radius_;
  j["schema"] = json::parse(schema_.to_json_string());
  return j.dump();
}

ColumnLayout ColumnLayout::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("layout: invalid JSON: ") + e.what());
  }
  GraphSchema schema = GraphSchema::from_json_string(j.at("schema").dump());
  return build(schema, j.at("radius").get<int>());
}

FeatureRow featurize_path(const HinGraph& g, const SimplePath& path, const ColumnLayout& layout) {
  // Bind the graph's type indices to layout blocks by name; unknown names or
  // arity changes mean the graph does not fit the layout.
  const GraphSchema& ls = layout.graph_schema();
  const GraphSchema& gs = g.schema();
  std::vector<int> node_map(gs.num_node_types());
  for (int t = 0; t < gs.num_node_types(); ++t) {
    const auto& def = gs.node_type(t);
    if (!ls.has_node_type(def.name))
      throw ValidationError("layout: node type '" + def.name + "' not present in model layout");
    int lt = ls.node_type_index(def.name);
    if (ls.node_type(lt).arity() != def.arity())
      throw ValidationError("layout: node type '" + def.name + "' arity mismatch with layout");
    node_map[t] = lt;
  }
  std::vector<int> edge_map(gs.num_edge_types());
  for (int t = 0; t < gs.num_edge_types(); ++t) {
    const auto& def = gs.edge_type(t);
    if (!ls.has_edge_type(def.name))
      throw ValidationError("layout: edge type '" + def.name + "' not present in model layout");
    int lt = ls.edge_type_index(def.name);
    if (ls.edge_type(lt).arity() != def.arity())
      throw ValidationError("layout: edge type '" + def.name + "' arity mismatch with layout");
    edge_map[t] = lt;
  }

  FeatureRow row;
  row.values = VecD::Zero(layout.width());
  row.missing = MaskVec::Ones(layout.width());

  auto write_block = [&row](int offset, const VecD& values, const MaskVec& missing) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      row.values(offset + i) = values(i);
      row.missing(offset + i) = missing(i);
    }
  };

  write_block(layout.head_offset(node_map[g.node_type(path.nodes.front())]),
              g.node_features(path.nodes.front()), g.node_missing(path.nodes.front()));

  const int steps = std::min<int>(path.length(), layout.radius());
  for (int k = 1; k <= steps; ++k) {
    const auto& e = g.edge(path.edges[k - 1]);
    write_block(layout.edge_offset(k, edge_map[e.type]), e.features, e.missing);
    NodeId v = path.nodes[k];
    write_block(layout.node_offset(k, node_map[g.node_type(v)]), g.node_features(v),
                g.node_missing(v));
  }
  return row;
}

}  // namespace ggbm
