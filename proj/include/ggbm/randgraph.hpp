#pragma once

#include <string>
#include <vector>

#include "ggbm/hin_graph.hpp"

namespace ggbm {

enum class GraphModel {
  ErdosRenyi,
  StochasticBlock,
  WattsStrogatz,
  Kleinberg,
  BarabasiAlbert,
  BianconiBarabasi,
};

std::string graph_model_name(GraphModel model);
GraphModel graph_model_from_name(const std::string& name);

// Defaults are the benchmark parameterization: sparse enough that a two-hop
// neighborhood carries a recoverable signal at 200 nodes.
struct GraphModelParams {
  GraphModel model = GraphModel::ErdosRenyi;
  int nodes = 200;
  std::uint64_t seed = 0;

  double er_p = 0.006;

  std::vector<int> sbm_block_sizes;  // empty = four equal blocks
  double sbm_p_in = 0.025;
  double sbm_p_out = 0.025 / 16.0;

  int ws_k = 2;  // even ring degree
  double ws_beta = 0.1;

  double kleinberg_q = 2.0;  // long-range exponent

  int ba_m = 1;  // attachment count, also used by the fitness variant

  void validate() const;
  static GraphModelParams defaults_for(GraphModel model, int nodes, std::uint64_t seed);
};

// Simple undirected homogeneous graph (one node type with a single real
// feature, unset until assign_features; one featureless edge type).
HinGraph generate(const GraphModelParams& params);

// Replaces the single node feature with i.i.d. standard normal draws.
HinGraph assign_features(const HinGraph& g, std::uint64_t seed);

// Standard normal density.
double normal_likelihood(double x);

enum class PathAgg { Min, Max, Mean };

std::string path_agg_name(PathAgg agg);
PathAgg path_agg_from_name(const std::string& name);

struct ScenarioConfig {
  int scenario = 1;
  int radius = 2;
  PathAgg agg = PathAgg::Mean;  // scenario 2 only
  double fraud_rate = 0.10;

  void validate() const;
};

// Score thresholding shared by both scenarios: exactly floor(rate * N) nodes
// with the lowest scores get label 1, ties broken by node id.
std::vector<std::int8_t> labels_from_scores(const std::vector<double>& scores, double rate);

// Per-node mean feature likelihood over the ego-net.
std::vector<double> scenario1_scores(const HinGraph& g, const ScenarioConfig& cfg);
std::vector<std::int8_t> scenario1_labels(const HinGraph& g, const ScenarioConfig& cfg);

// Per-node mean over maximal simple paths of an aggregation of likelihoods
// along each path.
std::vector<double> scenario2_scores(const HinGraph& g, const ScenarioConfig& cfg);
std::vector<std::int8_t> scenario2_labels(const HinGraph& g, const ScenarioConfig& cfg);

std::vector<std::int8_t> scenario_labels(const HinGraph& g, const ScenarioConfig& cfg);

}  // namespace ggbm
