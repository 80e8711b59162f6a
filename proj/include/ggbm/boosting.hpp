#pragma once

#include <optional>
#include <vector>

#include "ggbm/tree.hpp"

namespace ggbm {

// Tree model with shared prediction semantics: boosted mode applies the
// sigmoid of base score plus learning-rate-scaled tree sum, gini_tree mode is
// a single tree whose leaves hold class-1 proportions directly.
struct BoostedEnsemble {
  TrainMode mode = TrainMode::Boosted;
  TrainConfig config;
  double base_score = 0.0;
  std::vector<DecisionTree> trees;
  int num_columns = 0;
  std::uint64_t layout_digest = 0;

  // Weighted training loss per iteration, only populated by fit_boosted.
  std::vector<double> train_loss;

  double score_row(std::span<const double> values, std::span<const std::uint8_t> missing) const;
  double predict_row(std::span<const double> values, std::span<const std::uint8_t> missing) const;
  VecD predict(const PathDataset& ds) const;
};

double sigmoid(double x);

// Weighted binary log-loss of probabilities against labels.
double weighted_logloss(const VecD& probs, const std::vector<std::int8_t>& labels, const VecD& weights);

// Logistic-loss boosting on case-weighted rows. When eval is given and
// config.early_stopping_rounds > 0, keeps the iteration count with the best
// eval loss.
BoostedEnsemble fit_boosted(const PathDataset& ds, const TrainConfig& cfg,
                            const PathDataset* eval = nullptr);

// Mode dispatch: fit_boosted or a single proportion-leaf tree.
BoostedEnsemble train_model(const PathDataset& ds, const TrainConfig& cfg,
                            const PathDataset* eval = nullptr);

}  // namespace ggbm
