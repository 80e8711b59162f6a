#pragma once

#include "ggbm/boosting.hpp"

namespace ggbm {

// Per-column split-gain totals across all trees; unused columns score 0.
VecD gain_importance(const BoostedEnsemble& model);

enum class ImportanceMetric { RocAuc, PrAuc };

// Mean metric drop after shuffling one column's (value, missing) cells across
// rows; weights and labels stay attached to their rows.
VecD permutation_importance(const BoostedEnsemble& model, const PathDataset& ds,
                            ImportanceMetric metric, std::uint64_t seed, int repeats);

}  // namespace ggbm
