#include "ggbm/importance.hpp"

#include <numeric>
#include <random>

#include "ggbm/metrics.hpp"

namespace ggbm {

VecD gain_importance(const BoostedEnsemble& model) {
  VecD out = VecD::Zero(model.num_columns);
  for (const auto& tree : model.trees)
    for (const auto& node : tree.nodes())
      if (!node.leaf) out(node.split.column) += node.split.gain;
  return out;
}

namespace {

double metric_value(ImportanceMetric metric, const VecD& scores,
                    const std::vector<std::int8_t>& labels) {
  std::vector<double> s(scores.data(), scores.data() + scores.size());
  std::vector<int> y(labels.begin(), labels.end());
  if (metric == ImportanceMetric::RocAuc) return roc_auc(s, y);
  return pr_auc(s, y);
}

}  // namespace

VecD permutation_importance(const BoostedEnsemble& model, const PathDataset& ds,
                            ImportanceMetric metric, std::uint64_t seed, int repeats) {
  if (repeats < 1) throw ValidationError("importance: repeats must be >= 1");
  const double baseline = metric_value(metric, model.predict(ds), ds.labels);

  PathDataset shuffled = ds;
  VecD out = VecD::Zero(ds.cols());
  std::vector<int> perm(ds.rows());
  for (int c = 0; c < ds.cols(); ++c) {
    double drop_sum = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c) * 1000003ULL +
                                                static_cast<std::uint64_t>(rep)));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int r = 0; r < ds.rows(); ++r) {
        shuffled.values(r, c) = ds.values(perm[r], c);
        shuffled.missing(r, c) = ds.missing(perm[r], c);
      }
      drop_sum += baseline - metric_value(metric, model.predict(shuffled), ds.labels);
    }
    out(c) = drop_sum / repeats;
    shuffled.values.col(c) = ds.values.col(c);
    shuffled.missing.col(c) = ds.missing.col(c);
  }
  return out;
}

}  // namespace ggbm
