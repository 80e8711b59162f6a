#include "ggbm/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ggbm {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double BoostedEnsemble::score_row(std::span<const double> values,
                                  std::span<const std::uint8_t> missing) const {
  if (static_cast<int>(values.size()) != num_columns ||
      static_cast<int>(missing.size()) != num_columns)
    throw ValidationError("model: column count mismatch (expected " +
                          std::to_string(num_columns) + ", got " +
                          std::to_string(values.size()) + ")");
  double score = base_score;
  for (const auto& tree : trees) score += config.learning_rate * tree.predict_row(values, missing);
  return score;
}

double BoostedEnsemble::predict_row(std::span<const double> values,
                                    std::span<const std::uint8_t> missing) const {
  if (mode == TrainMode::GiniTree) {
    if (static_cast<int>(values.size()) != num_columns ||
        static_cast<int>(missing.size()) != num_columns)
      throw ValidationError("model: column count mismatch (expected " +
                            std::to_string(num_columns) + ", got " +
                            std::to_string(values.size()) + ")");
    if (trees.empty()) throw ValidationError("model: no trees");
    return trees.front().predict_row(values, missing);
  }
  return sigmoid(score_row(values, missing));
}

VecD BoostedEnsemble::predict(const PathDataset& ds) const {
  VecD out(ds.rows());
  for (int r = 0; r < ds.rows(); ++r) {
    std::span<const double> values(ds.values.row(r).data(), static_cast<std::size_t>(ds.cols()));
    std::span<const std::uint8_t> missing(ds.missing.row(r).data(),
                                          static_cast<std::size_t>(ds.cols()));
    out(r) = predict_row(values, missing);
  }
  return out;
}

double weighted_logloss(const VecD& probs, const std::vector<std::int8_t>& labels,
                        const VecD& weights) {
  if (probs.size() != static_cast<Eigen::Index>(labels.size()) || probs.size() != weights.size())
    throw ValidationError("logloss: length mismatch");
  double loss = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs(i), 1e-15, 1.0 - 1e-15);
    loss += weights(i) * (labels[i] ? -std::log(p) : -std::log(1.0 - p));
    total += weights(i);
  }
  return loss / total;
}

namespace {

std::vector<int> sample_columns(int cols, double fraction, std::mt19937_64& rng) {
  std::vector<int> all(cols);
  std::iota(all.begin(), all.end(), 0);
  if (fraction >= 1.0) return all;
  int keep = std::max(1, static_cast<int>(std::floor(fraction * cols)));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<std::uint8_t> sample_rows(int rows, double fraction, std::mt19937_64& rng) {
  if (fraction >= 1.0) return {};
  std::vector<int> all(rows);
  std::iota(all.begin(), all.end(), 0);
  int keep = std::max(1, static_cast<int>(std::floor(fraction * rows)));
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::uint8_t> mask(rows, 0);
  for (int i = 0; i < keep; ++i) mask[all[i]] = 1;
  return mask;
}

}  // namespace

BoostedEnsemble fit_boosted(const PathDataset& ds, const TrainConfig& cfg,
                            const PathDataset* eval) {
  cfg.validate();
  if (cfg.mode != TrainMode::Boosted)
    throw ValidationError("boosting: config mode must be boosted");
  if (ds.rows() < 1) throw ValidationError("boosting: dataset is empty");
  bool has0 = false, has1 = false;
  for (auto y : ds.labels) (y ? has1 : has0) = true;
  if (!has0 || !has1) throw ValidationError("boosting: single-class data");

  const VecD w = effective_weights(ds, cfg);
  double wy = 0.0, wt = 0.0;
  for (int r = 0; r < ds.rows(); ++r) {
    wy += ds.labels[r] ? w(r) : 0.0;
    wt += w(r);
  }
  const double prior = std::clamp(wy / wt, 1e-12, 1.0 - 1e-12);

  BoostedEnsemble model;
  model.mode = TrainMode::Boosted;
  model.config = cfg;
  model.base_score = std::log(prior / (1.0 - prior));
  model.num_columns = ds.cols();
  model.layout_digest = ds.layout.digest();

  detail::ColumnOrder order = detail::build_column_order(ds);

  VecD score = VecD::Constant(ds.rows(), model.base_score);
  VecD eval_score;
  VecD eval_w;
  if (eval) {
    if (eval->cols() != ds.cols())
      throw ValidationError("boosting: eval set column count mismatch");
    eval_score = VecD::Constant(eval->rows(), model.base_score);
    eval_w = effective_weights(*eval, cfg);
  }

  const bool early_stop = eval != nullptr && cfg.early_stopping_rounds > 0;
  double best_eval = std::numeric_limits<double>::infinity();
  int best_iter = -1;

  GradientTargets targets;
  targets.g.resize(ds.rows());
  targets.h.resize(ds.rows());

  for (int t = 0; t < cfg.num_trees; ++t) {
    for (int r = 0; r < ds.rows(); ++r) {
      const double p = sigmoid(score(r));
      targets.g(r) = (p - (ds.labels[r] ? 1.0 : 0.0)) * w(r);
      targets.h(r) = p * (1.0 - p) * w(r);
    }

    std::mt19937_64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    std::vector<int> columns = sample_columns(ds.cols(), cfg.feature_subsample, rng);
    std::vector<std::uint8_t> row_mask = sample_rows(ds.rows(), cfg.row_subsample, rng);

    DecisionTree tree = detail::fit_tree_ordered(ds, cfg, &targets, w, order, columns, row_mask);
    model.trees.push_back(tree);

    for (int r = 0; r < ds.rows(); ++r) {
      std::span<const double> values(ds.values.row(r).data(), static_cast<std::size_t>(ds.cols()));
      std::span<const std::uint8_t> missing(ds.missing.row(r).data(),
                                            static_cast<std::size_t>(ds.cols()));
      score(r) += cfg.learning_rate * tree.predict_row(values, missing);
    }
    VecD probs(ds.rows());
    for (int r = 0; r < ds.rows(); ++r) probs(r) = sigmoid(score(r));
    model.train_loss.push_back(weighted_logloss(probs, ds.labels, w));

    if (eval) {
      for (int r = 0; r < eval->rows(); ++r) {
        std::span<const double> values(eval->values.row(r).data(),
                                       static_cast<std::size_t>(eval->cols()));
        std::span<const std::uint8_t> missing(eval->missing.row(r).data(),
                                              static_cast<std::size_t>(eval->cols()));
        eval_score(r) += cfg.learning_rate * tree.predict_row(values, missing);
      }
      if (early_stop) {
        VecD eval_probs(eval->rows());
        for (int r = 0; r < eval->rows(); ++r) eval_probs(r) = sigmoid(eval_score(r));
        const double loss = weighted_logloss(eval_probs, eval->labels, eval_w);
        if (loss < best_eval - 1e-12) {
          best_eval = loss;
          best_iter = t;
        } else if (t - best_iter >= cfg.early_stopping_rounds) {
          model.trees.resize(best_iter + 1);
          model.train_loss.resize(best_iter + 1);
          break;
        }
      }
    }
  }
  return model;
}

BoostedEnsemble train_model(const PathDataset& ds, const TrainConfig& cfg,
                            const PathDataset* eval) {
  if (cfg.mode == TrainMode::Boosted) return fit_boosted(ds, cfg, eval);
  cfg.validate();
  if (ds.rows() < 1) throw ValidationError("tree: dataset is empty");
  BoostedEnsemble model;
  model.mode = TrainMode::GiniTree;
  model.config = cfg;
  model.base_score = 0.0;
  model.num_columns = ds.cols();
  model.layout_digest = ds.layout.digest();
  model.trees.push_back(fit_tree(ds, cfg, nullptr));
  return model;
}

}  // namespace ggbm
