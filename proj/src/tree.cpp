#include "ggbm/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ggbm {

void TrainConfig::validate() const {
  if (num_trees < 1) throw ValidationError("config: num_trees must be >= 1");
  if (!(learning_rate > 0) || learning_rate > 1)
    throw ValidationError("config: learning_rate must be in (0,1]");
  if (max_depth < 1) throw ValidationError("config: max_depth must be >= 1");
  if (min_child_weight < 0) throw ValidationError("config: min_child_weight must be >= 0");
  if (lambda_l2 < 0) throw ValidationError("config: lambda_l2 must be >= 0");
  if (!(feature_subsample > 0) || feature_subsample > 1)
    throw ValidationError("config: feature_subsample must be in (0,1]");
  if (!(row_subsample > 0) || row_subsample > 1)
    throw ValidationError("config: row_subsample must be in (0,1]");
  if (early_stopping_rounds < 0)
    throw ValidationError("config: early_stopping_rounds must be >= 0");
  if (!(positive_class_weight > 0))
    throw ValidationError("config: positive_class_weight must be > 0");
}

double DecisionTree::predict_row(std::span<const double> values,
                                 std::span<const std::uint8_t> missing) const {
  if (nodes_.empty()) throw ValidationError("tree: empty tree");
  int at = 0;
  while (!nodes_[at].leaf) {
    const SplitCandidate& s = nodes_[at].split;
    bool go_left;
    if (missing[s.column]) {
      go_left = s.missing_dir == MissingDirection::Left;
    } else if (s.categorical) {
      long long code = std::llround(values[s.column]);
      go_left = std::binary_search(s.left_categories.begin(), s.left_categories.end(), code);
    } else {
      go_left = values[s.column] <= s.threshold;
    }
    at = go_left ? nodes_[at].left : nodes_[at].right;
  }
  return nodes_[at].value;
}

VecD effective_weights(const PathDataset& ds, const TrainConfig& cfg) {
  VecD w = ds.weights;
  if (cfg.positive_class_weight != 1.0) {
    for (int i = 0; i < ds.rows(); ++i)
      if (ds.labels[i] == 1) w(i) *= cfg.positive_class_weight;
  }
  return w;
}

namespace detail {

ColumnOrder build_column_order(const PathDataset& ds) {
  ColumnOrder order;
  const int cols = ds.cols();
  const int rows = ds.rows();
  order.sorted_rows.resize(cols);
  order.missing_rows.resize(cols);
  std::vector<std::pair<double, int>> scratch;
  for (int c = 0; c < cols; ++c) {
    scratch.clear();
    for (int r = 0; r < rows; ++r) {
      if (ds.is_missing(r, c))
        order.missing_rows[c].push_back(r);
      else
        scratch.emplace_back(ds.values(r, c), r);
    }
    std::sort(scratch.begin(), scratch.end());
    order.sorted_rows[c].reserve(scratch.size());
    for (const auto& [v, r] : scratch) order.sorted_rows[c].push_back(r);
  }
  return order;
}

namespace {

// Weight, label-class and gradient sums of a row set; only the fields the
// current mode needs are maintained.
struct Agg {
  ClassWeights cw;
  double g = 0.0;
  double h = 0.0;
  double w = 0.0;
  int count = 0;

  void add(const Agg& o) {
    cw.w0 += o.cw.w0;
    cw.w1 += o.cw.w1;
    g += o.g;
    h += o.h;
    w += o.w;
    count += o.count;
  }
};

struct BestSplit {
  SplitCandidate split;
  double impurity = 0.0;  // gini mode comparison key (lower wins)
  double gain = 0.0;      // boosted comparison key (higher wins); also stored for importance
  bool valid = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const PathDataset& ds, const TrainConfig& cfg, const GradientTargets* targets,
              const VecD& weights)
      : ds_(ds), cfg_(cfg), targets_(targets), w_(weights),
        boosted_(cfg.mode == TrainMode::Boosted) {
    if (boosted_ && targets_ == nullptr)
      throw ValidationError("tree: boosted mode requires gradient targets");
  }

  DecisionTree build(const ColumnOrder& order, std::span<const int> columns,
                     std::span<const std::uint8_t> row_mask) {
    // Per-node working set: the rows plus, for every candidate column, the
    // value-ordered non-missing rows and the missing rows.
    Work root;
    root.columns.assign(columns.begin(), columns.end());
    const int rows = ds_.rows();
    root.rows.reserve(rows);
    for (int r = 0; r < rows; ++r)
      if (row_mask.empty() || row_mask[r]) root.rows.push_back(r);
    if (root.rows.empty()) throw ValidationError("tree: no rows to fit");
    root.ordered.resize(root.columns.size());
    root.missing.resize(root.columns.size());
    for (std::size_t ci = 0; ci < root.columns.size(); ++ci) {
      for (int r : order.sorted_rows[root.columns[ci]])
        if (row_mask.empty() || row_mask[r]) root.ordered[ci].push_back(r);
      for (int r : order.missing_rows[root.columns[ci]])
        if (row_mask.empty() || row_mask[r]) root.missing[ci].push_back(r);
    }
    nodes_.clear();
    grow(std::move(root), 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  struct Work {
    std::vector<int> rows;
    std::vector<int> columns;
    std::vector<std::vector<int>> ordered;
    std::vector<std::vector<int>> missing;
  };

  Agg row_agg(int r) const {
    Agg a;
    a.cw.add(ds_.labels[r], w_(r));
    if (boosted_) {
      a.g = targets_->g(r);
      a.h = targets_->h(r);
    }
    a.w = w_(r);
    a.count = 1;
    return a;
  }

  Agg aggregate(const std::vector<int>& rows) const {
    Agg a;
    for (int r : rows) a.add(row_agg(r));
    return a;
  }

  double leaf_value(const Agg& a) const {
    if (boosted_) return -a.g / (a.h + cfg_.lambda_l2);
    return a.cw.w1 / a.cw.total();
  }

  double boosted_obj(double g, double h) const { return g * g / (h + cfg_.lambda_l2); }

  // Scores one (left, right, missing) arrangement; returns false when a side
  // violates the weight floor or is empty.
  bool score_option(const Agg& left, const Agg& right, double& score_out) const {
    if (!(left.w > 0.0) || !(right.w > 0.0)) return false;
    if (left.w < cfg_.min_child_weight || right.w < cfg_.min_child_weight) return false;
    if (boosted_) {
      score_out = 0.5 * (boosted_obj(left.g, left.h) + boosted_obj(right.g, right.h));
    } else {
      score_out = split_impurity(left.cw, right.cw);
    }
    return true;
  }

  // Evaluates both missing routings of a boundary; returns the better one.
  bool eval_boundary(const Agg& left_base, const Agg& right_base, const Agg& miss,
                     MissingDirection& dir_out, double& score_out) const {
    Agg left_with = left_base;
    left_with.add(miss);
    Agg right_with = right_base;
    right_with.add(miss);
    double to_left = 0.0, to_right = 0.0;
    const bool ok_left = score_option(left_with, right_base, to_left);
    const bool ok_right = score_option(left_base, right_with, to_right);
    if (!ok_left && !ok_right) return false;
    if (ok_left && ok_right) {
      // gini compares impurities (lower better), boosted compares objective
      // gains (higher better); ties keep the left routing.
      const bool right_better = boosted_ ? (to_right > to_left + kImpurityTol)
                                         : (to_right < to_left - kImpurityTol);
      dir_out = right_better ? MissingDirection::Right : MissingDirection::Left;
      score_out = right_better ? to_right : to_left;
    } else if (ok_left) {
      dir_out = MissingDirection::Left;
      score_out = to_left;
    } else {
      dir_out = MissingDirection::Right;
      score_out = to_right;
    }
    return true;
  }

  // Candidate comparison: strictly-better-by-tolerance keeps the earliest
  // candidate, which encodes the lowest-column, lowest-threshold, left-first
  // tie-break order.
  bool better(const BestSplit& cand, const BestSplit& best) const {
    if (!best.valid) return cand.valid;
    if (!cand.valid) return false;
    if (boosted_) return cand.gain > best.gain + kImpurityTol;
    return cand.impurity < best.impurity - kImpurityTol;
  }

  void finish_candidate(BestSplit& cand, const Agg& node, double score) const {
    if (boosted_) {
      cand.gain = score - 0.5 * boosted_obj(node.g, node.h);
      cand.impurity = 0.0;
      cand.valid = cand.gain > kImpurityTol;
    } else {
      cand.impurity = score;
      cand.gain = (node.cw.gini() - score) * node.cw.total();
      cand.valid = true;
    }
    cand.split.gain = cand.gain;
  }

  BestSplit eval_real_column(int column, const std::vector<int>& ordered,
                             const std::vector<int>& missing_rows, const Agg& node) const {
    BestSplit best;
    if (ordered.size() < 2) return best;
    Agg miss = aggregate(missing_rows);
    Agg left;
    // Accumulate the non-missing side fresh instead of subtracting from the
    // node totals so left + right_rest stays exactly reproducible.
    Agg right_rest;
    for (int r : ordered) right_rest.add(row_agg(r));

    for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
      const int r = ordered[i];
      Agg a = row_agg(r);
      left.add(a);
      right_rest.g -= a.g;
      right_rest.h -= a.h;
      right_rest.w -= a.w;
      right_rest.count -= 1;
      right_rest.cw.w0 -= a.cw.w0;
      right_rest.cw.w1 -= a.cw.w1;

      const double v = ds_.values(r, column);
      const double v_next = ds_.values(ordered[i + 1], column);
      if (v == v_next) continue;

      MissingDirection dir;
      double score;
      if (!eval_boundary(left, right_rest, miss, dir, score)) continue;
      BestSplit cand;
      cand.split.column = column;
      cand.split.threshold = v + 0.5 * (v_next - v);
      cand.split.categorical = false;
      cand.split.missing_dir = dir;
      finish_candidate(cand, node, score);
      if (better(cand, best)) best = cand;
    }
    return best;
  }

  BestSplit eval_categorical_column(int column, const std::vector<int>& ordered,
                                    const std::vector<int>& missing_rows, const Agg& node) const {
    BestSplit best;
    if (ordered.empty()) return best;
    Agg miss = aggregate(missing_rows);

    // Group rows per code; ordered is value-sorted so groups are contiguous.
    std::vector<std::pair<long long, Agg>> groups;
    for (int r : ordered) {
      long long code = std::llround(ds_.values(r, column));
      if (groups.empty() || groups.back().first != code) groups.push_back({code, Agg{}});
      groups.back().second.add(row_agg(r));
    }
    if (groups.size() < 2) return best;

    // Category order: class-1 weight rate (gini) or gradient ratio (boosted);
    // stable sort keeps ascending code order on ties.
    auto rate = [this](const Agg& a) {
      if (boosted_) return a.g / (a.h + cfg_.lambda_l2);
      return a.cw.w1 / a.cw.total();
    };
    std::stable_sort(groups.begin(), groups.end(),
                     [&rate](const auto& a, const auto& b) { return rate(a.second) < rate(b.second); });

    Agg left;
    Agg right_rest;
    for (const auto& [code, agg] : groups) right_rest.add(agg);
    std::vector<long long> prefix_codes;
    for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
      left.add(groups[i].second);
      prefix_codes.push_back(groups[i].first);
      right_rest.g -= groups[i].second.g;
      right_rest.h -= groups[i].second.h;
      right_rest.w -= groups[i].second.w;
      right_rest.count -= groups[i].second.count;
      right_rest.cw.w0 -= groups[i].second.cw.w0;
      right_rest.cw.w1 -= groups[i].second.cw.w1;

      MissingDirection dir;
      double score;
      if (!eval_boundary(left, right_rest, miss, dir, score)) continue;
      BestSplit cand;
      cand.split.column = column;
      cand.split.categorical = true;
      cand.split.left_categories = prefix_codes;
      std::sort(cand.split.left_categories.begin(), cand.split.left_categories.end());
      cand.split.missing_dir = dir;
      finish_candidate(cand, node, score);
      if (better(cand, best)) best = cand;
    }
    return best;
  }

  bool goes_left(int r, const SplitCandidate& s) const {
    if (ds_.is_missing(r, s.column)) return s.missing_dir == MissingDirection::Left;
    if (s.categorical) {
      long long code = std::llround(ds_.values(r, s.column));
      return std::binary_search(s.left_categories.begin(), s.left_categories.end(), code);
    }
    return ds_.values(r, s.column) <= s.threshold;
  }

  int grow(Work work, int depth) {
    const Agg node = aggregate(work.rows);
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[index].value = leaf_value(node);

    if (depth >= cfg_.max_depth) return index;
    if (!boosted_ && node.cw.pure()) return index;

    BestSplit best;
    for (std::size_t ci = 0; ci < work.columns.size(); ++ci) {
      const int column = work.columns[ci];
      const bool categorical = ds_.layout.columns()[column].categorical;
      BestSplit cand = categorical
                           ? eval_categorical_column(column, work.ordered[ci], work.missing[ci], node)
                           : eval_real_column(column, work.ordered[ci], work.missing[ci], node);
      if (better(cand, best)) best = cand;
    }
    if (!best.valid) return index;

    Work left_work, right_work;
    left_work.columns = work.columns;
    right_work.columns = work.columns;
    left_work.ordered.resize(work.columns.size());
    left_work.missing.resize(work.columns.size());
    right_work.ordered.resize(work.columns.size());
    right_work.missing.resize(work.columns.size());
    for (int r : work.rows)
      (goes_left(r, best.split) ? left_work.rows : right_work.rows).push_back(r);
    for (std::size_t ci = 0; ci < work.columns.size(); ++ci) {
      for (int r : work.ordered[ci])
        (goes_left(r, best.split) ? left_work.ordered[ci] : right_work.ordered[ci]).push_back(r);
      for (int r : work.missing[ci])
        (goes_left(r, best.split) ? left_work.missing[ci] : right_work.missing[ci]).push_back(r);
    }
    work = Work{};  // release before recursing

    nodes_[index].leaf = false;
    nodes_[index].split = best.split;
    const int left_index = grow(std::move(left_work), depth + 1);
    const int right_index = grow(std::move(right_work), depth + 1);
    nodes_[index].left = left_index;
    nodes_[index].right = right_index;
    return index;
  }

  const PathDataset& ds_;
  const TrainConfig& cfg_;
  const GradientTargets* targets_;
  const VecD& w_;
  bool boosted_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree fit_tree_ordered(const PathDataset& ds, const TrainConfig& cfg,
                              const GradientTargets* targets, const VecD& weights,
                              const ColumnOrder& order, std::span<const int> columns,
                              std::span<const std::uint8_t> row_mask) {
  TreeBuilder builder(ds, cfg, targets, weights);
  return builder.build(order, columns, row_mask);
}

}  // namespace detail

DecisionTree fit_tree(const PathDataset& ds, const TrainConfig& cfg,
                      const GradientTargets* targets) {
  cfg.validate();
  if (ds.rows() < 1) throw ValidationError("tree: dataset is empty");
  if (targets && (targets->g.size() != ds.rows() || targets->h.size() != ds.rows()))
    throw ValidationError("tree: target length mismatch");
  VecD weights = effective_weights(ds, cfg);
  detail::ColumnOrder order = detail::build_column_order(ds);
  std::vector<int> columns(ds.cols());
  std::iota(columns.begin(), columns.end(), 0);
  return detail::fit_tree_ordered(ds, cfg, targets, weights, order, columns, {});
}

}  // namespace ggbm
