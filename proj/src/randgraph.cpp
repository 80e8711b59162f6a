#include "ggbm/randgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "ggbm/path_engine.hpp"

namespace ggbm {

std::string graph_model_name(GraphModel model) {
  switch (model) {
    case GraphModel::ErdosRenyi: return "erdos_renyi";
    case GraphModel::StochasticBlock: return "stochastic_block";
    case GraphModel::WattsStrogatz: return "watts_strogatz";
    case GraphModel::Kleinberg: return "kleinberg";
    case GraphModel::BarabasiAlbert: return "barabasi_albert";
    case GraphModel::BianconiBarabasi: return "bianconi_barabasi";
  }
  throw ValidationError("randgraph: unknown model");
}

GraphModel graph_model_from_name(const std::string& name) {
  for (GraphModel m : {GraphModel::ErdosRenyi, GraphModel::StochasticBlock,
                       GraphModel::WattsStrogatz, GraphModel::Kleinberg,
                       GraphModel::BarabasiAlbert, GraphModel::BianconiBarabasi})
    if (graph_model_name(m) == name) return m;
  throw ValidationError("randgraph: unknown model '" + name + "'");
}

void GraphModelParams::validate() const {
  if (nodes < 2) throw ValidationError("randgraph: node count must be >= 2");
  switch (model) {
    case GraphModel::ErdosRenyi:
      if (er_p < 0.0 || er_p > 1.0) throw ValidationError("randgraph: p must be in [0,1]");
      break;
    case GraphModel::StochasticBlock: {
      if (sbm_p_in < 0.0 || sbm_p_in > 1.0 || sbm_p_out < 0.0 || sbm_p_out > 1.0)
        throw ValidationError("randgraph: block probabilities must be in [0,1]");
      if (!sbm_block_sizes.empty()) {
        int sum = 0;
        for (int s : sbm_block_sizes) {
          if (s <= 0) throw ValidationError("randgraph: block sizes must be positive");
          sum += s;
        }
        if (sum != nodes)
          throw ValidationError("randgraph: block sizes sum to " + std::to_string(sum) +
                                ", expected " + std::to_string(nodes));
      }
      break;
    }
    case GraphModel::WattsStrogatz:
      if (ws_k < 2 || ws_k % 2 != 0 || ws_k >= nodes)
        throw ValidationError("randgraph: ring degree k must be even, >= 2 and < node count");
      if (ws_beta < 0.0 || ws_beta > 1.0)
        throw ValidationError("randgraph: rewiring probability must be in [0,1]");
      break;
    case GraphModel::Kleinberg:
      if (kleinberg_q < 0.0) throw ValidationError("randgraph: exponent q must be >= 0");
      break;
    case GraphModel::BarabasiAlbert:
    case GraphModel::BianconiBarabasi:
      if (ba_m < 1 || ba_m >= nodes)
        throw ValidationError("randgraph: attachment count m must be in [1, nodes)");
      break;
  }
}

GraphModelParams GraphModelParams::defaults_for(GraphModel model, int nodes, std::uint64_t seed) {
  GraphModelParams params;
  params.model = model;
  params.nodes = nodes;
  params.seed = seed;
  return params;
}

namespace {

using EdgeSet = std::set<std::pair<NodeId, NodeId>>;

void add_edge(EdgeSet& edges, NodeId u, NodeId v) {
  if (u == v) return;
  edges.insert({std::min(u, v), std::max(u, v)});
}

bool has_edge(const EdgeSet& edges, NodeId u, NodeId v) {
  return edges.count({std::min(u, v), std::max(u, v)}) > 0;
}

EdgeSet generate_er(int n, double p, std::mt19937_64& rng) {
  EdgeSet edges;
  if (p <= 0.0) return edges;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (unif(rng) < p) add_edge(edges, i, j);
  return edges;
}

EdgeSet generate_sbm(int n, std::vector<int> sizes, double p_in, double p_out,
                     std::mt19937_64& rng) {
  if (sizes.empty()) {
    // four blocks as equal as possible
    int base = n / 4, rem = n % 4;
    for (int b = 0; b < 4; ++b) sizes.push_back(base + (b < rem ? 1 : 0));
  }
  std::vector<int> block(n);
  int at = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b)
    for (int k = 0; k < sizes[b]; ++k) block[at++] = static_cast<int>(b);

  EdgeSet edges;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (unif(rng) < (block[i] == block[j] ? p_in : p_out)) add_edge(edges, i, j);
  return edges;
}

EdgeSet generate_ws(int n, int k, double beta, std::mt19937_64& rng) {
  EdgeSet edges;
  for (NodeId i = 0; i < n; ++i)
    for (int j = 1; j <= k / 2; ++j) add_edge(edges, i, static_cast<NodeId>((i + j) % n));

  // Edge-count-preserving rewiring of each clockwise lattice edge.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  for (NodeId i = 0; i < n; ++i) {
    for (int j = 1; j <= k / 2; ++j) {
      NodeId old_target = static_cast<NodeId>((i + j) % n);
      if (unif(rng) >= beta) continue;
      if (!has_edge(edges, i, old_target)) continue;  // already rewired away
      NodeId fresh = pick(rng);
      int attempts = 0;
      while ((fresh == i || has_edge(edges, i, fresh)) && attempts < 8 * n) {
        fresh = pick(rng);
        ++attempts;
      }
      if (fresh == i || has_edge(edges, i, fresh)) continue;  // node saturated
      edges.erase({std::min(i, old_target), std::max(i, old_target)});
      add_edge(edges, i, fresh);
    }
  }
  return edges;
}

EdgeSet generate_kleinberg(int n, double q, std::mt19937_64& rng) {
  // Square grid truncated to n cells (row-major), lattice neighbors plus one
  // long-range contact per node drawn with probability ~ distance^-q.
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  auto row = [side](NodeId v) { return v / side; };
  auto col = [side](NodeId v) { return v % side; };
  auto manhattan = [&](NodeId a, NodeId b) {
    return std::abs(row(a) - row(b)) + std::abs(col(a) - col(b));
  };

  EdgeSet edges;
  for (NodeId v = 0; v < n; ++v) {
    if (col(v) + 1 < side && v + 1 < n) add_edge(edges, v, v + 1);
    if (v + side < n) add_edge(edges, v, v + side);
  }

  std::vector<double> pow_cache(2 * side + 1, 0.0);
  for (int d = 2; d <= 2 * side; ++d) pow_cache[d] = std::pow(static_cast<double>(d), -q);

  std::vector<double> weight(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (NodeId v = 0; v < n; ++v) {
    double total = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      int d = (u == v) ? 0 : manhattan(v, u);
      weight[u] = d >= 2 ? pow_cache[d] : 0.0;
      total += weight[u];
    }
    if (total <= 0.0) continue;
    double r = unif(rng) * total;
    NodeId chosen = n - 1;
    for (NodeId u = 0; u < n; ++u) {
      r -= weight[u];
      if (r <= 0.0) {
        chosen = u;
        break;
      }
    }
    add_edge(edges, v, chosen);
  }
  return edges;
}

EdgeSet generate_ba(int n, int m, std::mt19937_64& rng) {
  EdgeSet edges;
  std::vector<NodeId> repeated;
  std::vector<NodeId> targets(m);
  std::iota(targets.begin(), targets.end(), 0);
  for (NodeId v = m; v < n; ++v) {
    for (NodeId u : targets) add_edge(edges, v, u);
    for (NodeId u : targets) repeated.push_back(u);
    repeated.insert(repeated.end(), m, v);
    // next targets: m distinct draws proportional to degree
    std::set<NodeId> next;
    std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
    while (static_cast<int>(next.size()) < m) next.insert(repeated[pick(rng)]);
    targets.assign(next.begin(), next.end());
  }
  return edges;
}

EdgeSet generate_bb(int n, int m, std::mt19937_64& rng) {
  // Preferential attachment with multiplicative node fitness.
  std::vector<double> fitness(n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n; ++i) fitness[i] = unif(rng);

  EdgeSet edges;
  std::vector<int> degree(n, 0);
  for (NodeId v = m; v < n; ++v) {
    std::set<NodeId> chosen;
    if (v == m) {
      for (NodeId u = 0; u < m; ++u) chosen.insert(u);
    } else {
      while (static_cast<int>(chosen.size()) < m) {
        double total = 0.0;
        for (NodeId u = 0; u < v; ++u)
          if (!chosen.count(u)) total += fitness[u] * degree[u];
        if (total <= 0.0) {
          // no attached mass left; fall back to uniform over the rest
          std::vector<NodeId> rest;
          for (NodeId u = 0; u < v; ++u)
            if (!chosen.count(u)) rest.push_back(u);
          std::uniform_int_distribution<std::size_t> pick(0, rest.size() - 1);
          chosen.insert(rest[pick(rng)]);
          continue;
        }
        double r = unif(rng) * total;
        NodeId pick_u = v - 1;
        for (NodeId u = 0; u < v; ++u) {
          if (chosen.count(u)) continue;
          r -= fitness[u] * degree[u];
          if (r <= 0.0) {
            pick_u = u;
            break;
          }
        }
        chosen.insert(pick_u);
      }
    }
    for (NodeId u : chosen) {
      add_edge(edges, v, u);
      ++degree[u];
      ++degree[v];
    }
  }
  return edges;
}

}  // namespace

HinGraph generate(const GraphModelParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  EdgeSet edges;
  switch (params.model) {
    case GraphModel::ErdosRenyi: edges = generate_er(params.nodes, params.er_p, rng); break;
    case GraphModel::StochasticBlock:
      edges = generate_sbm(params.nodes, params.sbm_block_sizes, params.sbm_p_in, params.sbm_p_out,
                           rng);
      break;
    case GraphModel::WattsStrogatz:
      edges = generate_ws(params.nodes, params.ws_k, params.ws_beta, rng);
      break;
    case GraphModel::Kleinberg:
      edges = generate_kleinberg(params.nodes, params.kleinberg_q, rng);
      break;
    case GraphModel::BarabasiAlbert: edges = generate_ba(params.nodes, params.ba_m, rng); break;
    case GraphModel::BianconiBarabasi: edges = generate_bb(params.nodes, params.ba_m, rng); break;
  }

  std::vector<NodeInput> nodes(params.nodes);
  for (int i = 0; i < params.nodes; ++i) {
    nodes[i].id = std::to_string(i);
    nodes[i].type = "node";
    nodes[i].features = {std::nullopt};
  }
  std::vector<EdgeInput> edge_inputs;
  edge_inputs.reserve(edges.size());
  for (const auto& [u, v] : edges)
    edge_inputs.push_back({std::to_string(u), std::to_string(v), "link", {}});
  return build_graph(GraphSchema::homogeneous(), nodes, edge_inputs);
}

HinGraph assign_features(const HinGraph& g, std::uint64_t seed) {
  if (g.schema().num_node_types() != 1 || g.schema().node_type(0).arity() != 1)
    throw ValidationError("randgraph: assign_features requires a homogeneous univariate graph");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VecD values(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) values(v) = normal(rng);
  return g.with_node_feature(0, values);
}

double normal_likelihood(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

std::string path_agg_name(PathAgg agg) {
  switch (agg) {
    case PathAgg::Min: return "min";
    case PathAgg::Max: return "max";
    case PathAgg::Mean: return "mean";
  }
  throw ValidationError("randgraph: unknown aggregation");
}

PathAgg path_agg_from_name(const std::string& name) {
  if (name == "min") return PathAgg::Min;
  if (name == "max") return PathAgg::Max;
  if (name == "mean") return PathAgg::Mean;
  throw ValidationError("randgraph: unknown aggregation '" + name + "'");
}

void ScenarioConfig::validate() const {
  if (scenario != 1 && scenario != 2) throw ValidationError("scenario: must be 1 or 2");
  if (radius < 0) throw ValidationError("scenario: radius must be >= 0");
  if (!(fraud_rate > 0.0 && fraud_rate < 0.5))
    throw ValidationError("scenario: fraud rate must be in (0, 0.5)");
}

std::vector<std::int8_t> labels_from_scores(const std::vector<double>& scores, double rate) {
  const int n = static_cast<int>(scores.size());
  const int positives = static_cast<int>(std::floor(rate * n));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](int a, int b) { return scores[a] < scores[b]; });
  std::vector<std::int8_t> labels(n, 0);
  for (int i = 0; i < positives; ++i) labels[order[i]] = 1;
  return labels;
}

namespace {

double node_feature_likelihood(const HinGraph& g, NodeId v) {
  if (g.node_missing(v)(0))
    throw ValidationError("scenario: node features must be assigned first");
  return normal_likelihood(g.node_features(v)(0));
}

}  // namespace

std::vector<double> scenario1_scores(const HinGraph& g, const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<double> scores(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    EgoNet ego = egonet(g, v, cfg.radius);
    double sum = 0.0;
    for (NodeId u : ego.nodes()) sum += node_feature_likelihood(g, u);
    scores[v] = sum / static_cast<double>(ego.nodes().size());
  }
  return scores;
}

std::vector<std::int8_t> scenario1_labels(const HinGraph& g, const ScenarioConfig& cfg) {
  return labels_from_scores(scenario1_scores(g, cfg), cfg.fraud_rate);
}

std::vector<double> scenario2_scores(const HinGraph& g, const ScenarioConfig& cfg) {
  cfg.validate();
  MetapathSchema wildcard = MetapathSchema::wildcard(cfg.radius);
  std::vector<double> scores(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    EgoNet ego = egonet(g, v, cfg.radius);
    auto paths = enumerate_paths(ego, wildcard);
    double sum = 0.0;
    for (const auto& path : paths) {
      double agg = 0.0;
      switch (cfg.agg) {
        case PathAgg::Min: {
          agg = std::numeric_limits<double>::infinity();
          for (NodeId u : path.nodes) agg = std::min(agg, node_feature_likelihood(g, u));
          break;
        }
        case PathAgg::Max: {
          agg = -std::numeric_limits<double>::infinity();
          for (NodeId u : path.nodes) agg = std::max(agg, node_feature_likelihood(g, u));
          break;
        }
        case PathAgg::Mean: {
          for (NodeId u : path.nodes) agg += node_feature_likelihood(g, u);
          agg /= static_cast<double>(path.nodes.size());
          break;
        }
      }
      sum += agg;
    }
    scores[v] = sum / static_cast<double>(paths.size());
  }
  return scores;
}

std::vector<std::int8_t> scenario2_labels(const HinGraph& g, const ScenarioConfig& cfg) {
  return labels_from_scores(scenario2_scores(g, cfg), cfg.fraud_rate);
}

std::vector<std::int8_t> scenario_labels(const HinGraph& g, const ScenarioConfig& cfg) {
  return cfg.scenario == 1 ? scenario1_labels(g, cfg) : scenario2_labels(g, cfg);
}

}  // namespace ggbm
