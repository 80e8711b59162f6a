#include "ggbm/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ggbm {

using nlohmann::json;

namespace {

json node_to_json(const std::vector<TreeNode>& nodes, int index) {
  const TreeNode& node = nodes.at(index);
  if (node.leaf) return json{{"leaf_value", node.value}};
  json j;
  j["column"] = node.split.column;
  if (node.split.categorical)
    j["categories"] = node.split.left_categories;
  else
    j["threshold"] = node.split.threshold;
  j["missing_dir"] = node.split.missing_dir == MissingDirection::Left ? "left" : "right";
  j["gain"] = node.split.gain;
  j["left"] = node_to_json(nodes, node.left);
  j["right"] = node_to_json(nodes, node.right);
  return j;
}

int node_from_json(const json& j, std::vector<TreeNode>& nodes) {
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (j.contains("leaf_value")) {
    nodes[index].leaf = true;
    nodes[index].value = j.at("leaf_value").get<double>();
    return index;
  }
  nodes[index].leaf = false;
  nodes[index].split.column = j.at("column").get<int>();
  if (j.contains("categories")) {
    nodes[index].split.categorical = true;
    nodes[index].split.left_categories = j.at("categories").get<std::vector<long long>>();
  } else {
    nodes[index].split.categorical = false;
    nodes[index].split.threshold = j.at("threshold").get<double>();
  }
  const std::string dir = j.at("missing_dir").get<std::string>();
  if (dir != "left" && dir != "right")
    throw ValidationError("model: missing_dir must be left|right");
  nodes[index].split.missing_dir =
      dir == "left" ? MissingDirection::Left : MissingDirection::Right;
  nodes[index].split.gain = j.value("gain", 0.0);
  const int left = node_from_json(j.at("left"), nodes);
  const int right = node_from_json(j.at("right"), nodes);
  nodes[index].left = left;
  nodes[index].right = right;
  return index;
}

json config_to_json(const TrainConfig& cfg) {
  return json{{"mode", cfg.mode == TrainMode::Boosted ? "boosted" : "gini_tree"},
              {"num_trees", cfg.num_trees},
              {"learning_rate", cfg.learning_rate},
              {"max_depth", cfg.max_depth},
              {"min_child_weight", cfg.min_child_weight},
              {"lambda_l2", cfg.lambda_l2},
              {"feature_subsample", cfg.feature_subsample},
              {"row_subsample", cfg.row_subsample},
              {"seed", cfg.seed},
              {"early_stopping_rounds", cfg.early_stopping_rounds},
              {"positive_class_weight", cfg.positive_class_weight}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig cfg;
  const std::string mode = j.value("mode", "boosted");
  if (mode == "boosted")
    cfg.mode = TrainMode::Boosted;
  else if (mode == "gini_tree")
    cfg.mode = TrainMode::GiniTree;
  else
    throw ValidationError("model: mode must be boosted|gini_tree");
  cfg.num_trees = j.value("num_trees", cfg.num_trees);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.max_depth = j.value("max_depth", cfg.max_depth);
  cfg.min_child_weight = j.value("min_child_weight", cfg.min_child_weight);
  cfg.lambda_l2 = j.value("lambda_l2", cfg.lambda_l2);
  cfg.feature_subsample = j.value("feature_subsample", cfg.feature_subsample);
  cfg.row_subsample = j.value("row_subsample", cfg.row_subsample);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.early_stopping_rounds = j.value("early_stopping_rounds", cfg.early_stopping_rounds);
  cfg.positive_class_weight = j.value("positive_class_weight", cfg.positive_class_weight);
  cfg.validate();
  return cfg;
}

}  // namespace

std::string model_to_json_string(const BoostedEnsemble& model) {
  json j;
  j["version"] = 1;
  j["mode"] = model.mode == TrainMode::Boosted ? "boosted" : "gini_tree";
  j["config"] = config_to_json(model.config);
  j["layout_digest"] = hex64(model.layout_digest);
  j["base_score"] = model.base_score;
  j["num_columns"] = model.num_columns;
  j["trees"] = json::array();
  for (const auto& tree : model.trees) j["trees"].push_back(node_to_json(tree.nodes(), 0));
  return j.dump(2);
}

BoostedEnsemble model_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: invalid JSON: ") + e.what());
  }
  if (j.value("version", 0) != 1) throw ValidationError("model: unsupported version");
  BoostedEnsemble model;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "boosted")
    model.mode = TrainMode::Boosted;
  else if (mode == "gini_tree")
    model.mode = TrainMode::GiniTree;
  else
    throw ValidationError("model: mode must be boosted|gini_tree");
  model.config = config_from_json(j.at("config"));
  model.base_score = j.at("base_score").get<double>();
  model.num_columns = j.at("num_columns").get<int>();
  model.layout_digest = std::stoull(j.at("layout_digest").get<std::string>(), nullptr, 16);
  for (const auto& tj : j.at("trees")) {
    std::vector<TreeNode> nodes;
    node_from_json(tj, nodes);
    model.trees.emplace_back(std::move(nodes));
  }
  return model;
}

void save_model(const BoostedEnsemble& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("model: cannot write '" + path + "'");
  out << model_to_json_string(model) << "\n";
}

BoostedEnsemble load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("model: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json_string(ss.str());
}

}  // namespace ggbm
