#include "ggbm/ggbm.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ggbm/model_io.hpp"

namespace ggbm {

using nlohmann::json;

GgbmModel fit_ggbm(const HinGraph& g, std::span<const NodeId> heads, const MetapathSchema& schema,
                   int radius, const TrainConfig& cfg, const PathLimits& limits, int workers,
                   const HinGraph* eval_graph, std::span<const NodeId> eval_heads) {
  if (heads.empty()) throw ValidationError("ggbm: no head nodes");
  if (schema.max_length() != radius)
    throw ValidationError("ggbm: metapath max length must equal the radius");
  bool head0 = false, head1 = false;
  for (NodeId h : heads) {
    if (h >= 0 && h < g.num_nodes() && g.has_label(h)) (*g.label(h) ? head1 : head0) = true;
  }
  if (!head0 || !head1) throw ValidationError("ggbm: single-class heads");

  PathDataset ds = build_dataset(g, heads, radius, schema, limits, workers);

  GgbmModel model;
  model.metapaths = schema;
  model.radius = radius;
  model.layout = ds.layout;
  if (cfg.mode == TrainMode::Boosted) {
    if (eval_graph != nullptr && !eval_heads.empty()) {
      PathDataset eval_ds = build_dataset(*eval_graph, eval_heads, radius, schema, limits, workers);
      model.ensemble = fit_boosted(ds, cfg, &eval_ds);
    } else {
      model.ensemble = fit_boosted(ds, cfg, nullptr);
    }
  } else {
    model.ensemble = train_model(ds, cfg, nullptr);
  }
  return model;
}

double predict_node_with(const HinGraph& g, NodeId v, const MetapathSchema& schema, int radius,
                         const ColumnLayout& layout,
                         const std::function<double(std::size_t, const FeatureRow&)>& path_score,
                         const PathLimits& limits) {
  EgoNet ego = egonet(g, v, radius);
  auto weighted = enumerate_weighted_paths(ego, schema, limits);
  double out = 0.0;
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    FeatureRow row = featurize_path(g, weighted[i].path, layout);
    out += weighted[i].weight * path_score(i, row);
  }
  return out;
}

double predict_node(const GgbmModel& model, const HinGraph& g, NodeId v,
                    const PathLimits& limits) {
  if (v < 0 || v >= g.num_nodes())
    throw ValidationError("ggbm: unknown node " + std::to_string(v));
  return predict_node_with(
      g, v, model.metapaths, model.radius, model.layout,
      [&model](std::size_t, const FeatureRow& row) {
        return model.ensemble.predict_row(
            std::span<const double>(row.values.data(), static_cast<std::size_t>(row.values.size())),
            std::span<const std::uint8_t>(row.missing.data(),
                                          static_cast<std::size_t>(row.missing.size())));
      },
      limits);
}

VecD predict_nodes(const GgbmModel& model, const HinGraph& g, std::span<const NodeId> nodes,
                   const PathLimits& limits, int workers) {
  VecD out(nodes.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker_fn = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= nodes.size()) break;
      try {
        out(i) = predict_node(model, g, nodes[i], limits);
      } catch (...) {
        failed.store(true);
        failure = std::current_exception();
        break;
      }
    }
  };
  int n_workers = std::max(1, workers);
  if (n_workers == 1 || nodes.size() <= 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker_fn);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

int classify(double probability, double threshold) {
  if (probability < 0.0 || probability > 1.0)
    throw ValidationError("ggbm: probability out of [0,1]");
  return probability >= threshold ? 1 : 0;
}

GroupedImportance importance_grouped(const GgbmModel& model, const PathDataset* eval,
                                     std::uint64_t seed, int repeats) {
  if (eval && eval->layout.digest() != model.layout.digest())
    throw ValidationError("ggbm: eval dataset layout digest mismatch");

  VecD gain = gain_importance(model.ensemble);
  VecD perm;
  if (eval) perm = permutation_importance(model.ensemble, *eval, ImportanceMetric::RocAuc, seed,
                                          repeats);

  GroupedImportance out;
  const auto& cols = model.layout.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    ImportanceEntry entry;
    entry.column = cols[c].name;
    entry.level = cols[c].level;
    switch (cols[c].kind) {
      case SlotKind::Head: entry.slot = "H"; break;
      case SlotKind::Edge: entry.slot = "E" + std::to_string(cols[c].level); break;
      case SlotKind::Node: entry.slot = "N" + std::to_string(cols[c].level); break;
    }
    entry.type_name = cols[c].type_name;
    entry.feature_name = cols[c].feature_name;
    entry.gain = gain(static_cast<Eigen::Index>(c));
    if (eval) {
      entry.permutation = perm(static_cast<Eigen::Index>(c));
      entry.has_permutation = true;
    }
    out.by_slot[entry.slot] += entry.gain;
    out.by_level[entry.level] += entry.gain;
    out.by_type[entry.type_name] += entry.gain;
    out.columns.push_back(std::move(entry));
  }
  return out;
}

std::string GgbmModel::to_json_string() const {
  json j = json::parse(model_to_json_string(ensemble));
  j["radius"] = radius;
  j["metapaths"] = json::parse(metapaths.to_json_string());
  j["classification_threshold"] = threshold;
  j["layout"] = json::parse(layout.to_json_string());
  return j.dump(2);
}

GgbmModel GgbmModel::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("ggbm model: invalid JSON: ") + e.what());
  }
  GgbmModel model;
  model.ensemble = model_from_json_string(text);
  model.radius = j.at("radius").get<int>();
  model.metapaths = MetapathSchema::from_json_string(j.at("metapaths").dump());
  model.threshold = j.value("classification_threshold", 0.5);
  model.layout = ColumnLayout::from_json_string(j.at("layout").dump());
  if (model.layout.radius() != model.radius)
    throw ValidationError("ggbm model: layout radius does not match model radius");
  if (!(model.threshold > 0.0 && model.threshold < 1.0))
    throw ValidationError("ggbm model: classification threshold must be in (0,1)");
  return model;
}

void GgbmModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("ggbm model: cannot write '" + path + "'");
  out << to_json_string() << "\n";
}

GgbmModel GgbmModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("ggbm model: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

}  // namespace ggbm
