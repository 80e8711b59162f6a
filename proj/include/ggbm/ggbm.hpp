#pragma once

#include <functional>
#include <map>
#include <string>

#include "ggbm/boosting.hpp"
#include "ggbm/dataset.hpp"
#include "ggbm/importance.hpp"

namespace ggbm {

// Node scorer over a graph: trains a case-weighted ensemble on featurized
// maximal paths and predicts a node as the walk-probability-weighted sum of
// its per-path predictions. Scoring re-enumerates paths on whatever graph it
// is given, so updated graphs never require a refit.
struct GgbmModel {
  BoostedEnsemble ensemble;
  MetapathSchema metapaths = MetapathSchema::wildcard(0);
  int radius = 0;
  ColumnLayout layout;
  double threshold = 0.5;

  std::string to_json_string() const;
  static GgbmModel from_json_string(const std::string& text);
  void save(const std::string& path) const;
  static GgbmModel load(const std::string& path);
};

GgbmModel fit_ggbm(const HinGraph& g, std::span<const NodeId> heads, const MetapathSchema& schema,
                   int radius, const TrainConfig& cfg, const PathLimits& limits = {},
                   int workers = 1, const HinGraph* eval_graph = nullptr,
                   std::span<const NodeId> eval_heads = {});

double predict_node(const GgbmModel& model, const HinGraph& g, NodeId v,
                    const PathLimits& limits = {});

// Weighted aggregation with an injectable per-path scorer (index follows
// enumeration order).
double predict_node_with(const HinGraph& g, NodeId v, const MetapathSchema& schema, int radius,
                         const ColumnLayout& layout,
                         const std::function<double(std::size_t, const FeatureRow&)>& path_score,
                         const PathLimits& limits = {});

VecD predict_nodes(const GgbmModel& model, const HinGraph& g, std::span<const NodeId> nodes,
                   const PathLimits& limits = {}, int workers = 1);

int classify(double probability, double threshold);

struct ImportanceEntry {
  std::string column;
  std::string slot;  // "H", "E1", "N1", ...
  int level = 0;
  std::string type_name;
  std::string feature_name;
  double gain = 0.0;
  double permutation = 0.0;
  bool has_permutation = false;
};

struct GroupedImportance {
  std::vector<ImportanceEntry> columns;
  std::map<std::string, double> by_slot;
  std::map<int, double> by_level;
  std::map<std::string, double> by_type;
};

// Gain importance aggregated by layout slot/level/type; adds permutation
// importance when an evaluation dataset is supplied.
GroupedImportance importance_grouped(const GgbmModel& model, const PathDataset* eval = nullptr,
                                     std::uint64_t seed = 0, int repeats = 3);

}  // namespace ggbm
