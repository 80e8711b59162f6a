#pragma once

#include <span>
#include <vector>

#include "ggbm/dataset.hpp"
#include "ggbm/impurity.hpp"

namespace ggbm {

enum class TrainMode { GiniTree, Boosted };

struct TrainConfig {
  TrainMode mode = TrainMode::Boosted;
  int num_trees = 200;
  double learning_rate = 0.1;
  int max_depth = 6;
  double min_child_weight = 1e-3;  // sum of case weights per child
  double lambda_l2 = 1.0;
  double feature_subsample = 1.0;
  double row_subsample = 1.0;
  std::uint64_t seed = 0;
  int early_stopping_rounds = 0;  // 0 disables; applies when an eval set is given
  double positive_class_weight = 1.0;

  void validate() const;
};

struct SplitCandidate {
  int column = -1;
  double threshold = 0.0;                  // real split: value <= threshold goes left
  std::vector<long long> left_categories;  // categorical split: sorted codes going left
  bool categorical = false;
  MissingDirection missing_dir = MissingDirection::Left;
  double gain = 0.0;
};

struct TreeNode {
  bool leaf = true;
  double value = 0.0;  // class-1 proportion (gini mode) or additive score (boosted)
  SplitCandidate split;
  int left = -1;
  int right = -1;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  bool single_leaf() const { return nodes_.size() == 1; }

  // Total routing: every row reaches exactly one leaf, missing values follow
  // the stored direction, unseen categories go right.
  double predict_row(std::span<const double> values, std::span<const std::uint8_t> missing) const;

 private:
  std::vector<TreeNode> nodes_;
};

// Second-order targets, already multiplied by the row's case weight.
struct GradientTargets {
  VecD g;
  VecD h;
};

// Greedy exhaustive split search over sorted unique thresholds (real columns)
// and rate-ordered category prefixes (categorical columns); missing rows go to
// whichever side scores better, ties left, then lowest column/threshold.
DecisionTree fit_tree(const PathDataset& ds, const TrainConfig& cfg,
                      const GradientTargets* targets = nullptr);

VecD effective_weights(const PathDataset& ds, const TrainConfig& cfg);

namespace detail {

struct ColumnOrder {
  std::vector<std::vector<int>> sorted_rows;   // per column, non-missing rows by value
  std::vector<std::vector<int>> missing_rows;  // per column
};

ColumnOrder build_column_order(const PathDataset& ds);

DecisionTree fit_tree_ordered(const PathDataset& ds, const TrainConfig& cfg,
                              const GradientTargets* targets, const VecD& weights,
                              const ColumnOrder& order, std::span<const int> columns,
                              std::span<const std::uint8_t> row_mask);

}  // namespace detail

}  // namespace ggbm
