#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ggbm/hin_graph.hpp"
#include "ggbm/metapath.hpp"
#include "ggbm/path_engine.hpp"

namespace ggbm::testing {

// Two-type fixture: a hub company 0 with five spokes, two-hop fringe and one
// shared fringe node. Types: companies {0,2,3,4,5,6,9}, admins {1,7,8}.
// Edges: (0,1)(0,2)(0,3)(0,4)(0,5)(1,6)(2,7)(4,8)(4,9)(5,9).
inline HinGraph make_hub_graph() {
  NodeTypeDef company{"company", {{"size", false}, {"age", false}}};
  NodeTypeDef admin{"admin", {{"age", false}}};
  EdgeTypeDef rel{"rel", "", "", {{"strength", false}}};
  GraphSchema schema({company, admin}, {rel});

  auto company_node = [](int id, std::optional<int> label = std::nullopt) {
    NodeInput n;
    n.id = std::to_string(id);
    n.type = "company";
    n.features = {id + 0.5, id * 2.0};
    n.label = label;
    return n;
  };
  auto admin_node = [](int id) {
    NodeInput n;
    n.id = std::to_string(id);
    n.type = "admin";
    n.features = {id + 0.25};
    return n;
  };

  std::vector<NodeInput> nodes{company_node(0, 1), admin_node(1),  company_node(2),
                               company_node(3),    company_node(4), company_node(5),
                               company_node(6),    admin_node(7),  admin_node(8),
                               company_node(9)};
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
                                         {1, 6}, {2, 7}, {4, 8}, {4, 9}, {5, 9}};
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    edges.push_back({std::to_string(pairs[i].first), std::to_string(pairs[i].second), "rel",
                     {100.0 + static_cast<double>(i)}});
  return build_graph(schema, nodes, edges);
}

// Homogeneous graph over the standard one-feature schema.
inline HinGraph make_homogeneous(int n, const std::vector<std::pair<int, int>>& edges,
                                 const std::vector<double>& features = {},
                                 const std::vector<int>& labels = {}) {
  std::vector<NodeInput> nodes(n);
  for (int i = 0; i < n; ++i) {
    nodes[i].id = std::to_string(i);
    nodes[i].type = "node";
    nodes[i].features = {features.empty() ? std::optional<double>(0.0)
                                          : std::optional<double>(features[i])};
    if (!labels.empty()) nodes[i].label = labels[i];
  }
  std::vector<EdgeInput> edge_inputs;
  for (const auto& [u, v] : edges)
    edge_inputs.push_back({std::to_string(u), std::to_string(v), "link", {}});
  return build_graph(GraphSchema::homogeneous(), nodes, edge_inputs);
}

// All maximal simple paths from head, length-capped at max_len, by extending
// every extendable sequence; the reference the DFS enumerator must match.
inline std::vector<std::vector<NodeId>> brute_force_max_paths(const EgoNet& ego, int max_len) {
  const HinGraph& g = ego.graph();
  std::vector<std::vector<NodeId>> result;
  std::vector<std::vector<NodeId>> frontier{{ego.head()}};
  while (!frontier.empty()) {
    std::vector<std::vector<NodeId>> next;
    for (const auto& seq : frontier) {
      bool extended = false;
      if (static_cast<int>(seq.size()) - 1 < max_len) {
        for (const auto& [nb, eid] : g.neighbors(seq.back())) {
          if (!ego.contains(nb)) continue;
          if (std::find(seq.begin(), seq.end(), nb) != seq.end()) continue;
          auto longer = seq;
          longer.push_back(nb);
          next.push_back(std::move(longer));
          extended = true;
        }
      }
      if (!extended) result.push_back(seq);
    }
    frontier.swap(next);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace ggbm::testing
