#include "ggbm/impurity.hpp"

namespace ggbm {

namespace {

ClassWeights accumulate(std::span<const double> weights, std::span<const int> labels) {
  if (weights.size() != labels.size())
    throw ValidationError("impurity: weight/label length mismatch");
  ClassWeights cw;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0)) throw ValidationError("impurity: weights must be positive");
    if (labels[i] != 0 && labels[i] != 1) throw ValidationError("impurity: labels must be 0 or 1");
    cw.add(labels[i], weights[i]);
  }
  return cw;
}

}  // namespace

double weighted_gini(std::span<const double> weights, std::span<const int> labels) {
  ClassWeights cw = accumulate(weights, labels);
  if (cw.empty()) throw ValidationError("impurity: empty set");
  return cw.gini();
}

double gini(std::span<const int> labels) {
  if (labels.empty()) throw ValidationError("impurity: empty set");
  ClassWeights cw;
  for (int y : labels) {
    if (y != 0 && y != 1) throw ValidationError("impurity: labels must be 0 or 1");
    cw.add(y, 1.0);
  }
  return cw.gini();
}

double split_impurity(const ClassWeights& left, const ClassWeights& right) {
  if (left.empty() || right.empty()) throw ValidationError("impurity: empty split side");
  const double total = left.total() + right.total();
  return (left.total() / total) * left.gini() + (right.total() / total) * right.gini();
}

double split_impurity(std::span<const double> left_w, std::span<const int> left_y,
                      std::span<const double> right_w, std::span<const int> right_y) {
  return split_impurity(accumulate(left_w, left_y), accumulate(right_w, right_y));
}

MissingChoice missing_split_choice(const ClassWeights& left, const ClassWeights& right,
                                   const ClassWeights& missing) {
  if (left.empty() && right.empty()) throw ValidationError("impurity: both split sides empty");
  const bool left_ok = !(left + missing).empty() && !right.empty();
  const bool right_ok = !left.empty() && !(right + missing).empty();
  const double to_left = left_ok ? split_impurity(left + missing, right) : 0.0;
  const double to_right = right_ok ? split_impurity(left, right + missing) : 0.0;
  if (left_ok && right_ok) {
    if (to_right < to_left - kImpurityTol) return {MissingDirection::Right, to_right};
    return {MissingDirection::Left, to_left};
  }
  if (left_ok) return {MissingDirection::Left, to_left};
  return {MissingDirection::Right, to_right};
}

MissingChoice missing_split_choice(std::span<const double> left_w, std::span<const int> left_y,
                                   std::span<const double> right_w, std::span<const int> right_y,
                                   std::span<const double> miss_w, std::span<const int> miss_y) {
  ClassWeights miss;
  if (!miss_w.empty()) miss = accumulate(miss_w, miss_y);
  ClassWeights left, right;
  if (!left_w.empty()) left = accumulate(left_w, left_y);
  if (!right_w.empty()) right = accumulate(right_w, right_y);
  return missing_split_choice(left, right, miss);
}

}  // namespace ggbm
