#pragma once

#include <span>

#include "ggbm/types.hpp"

namespace ggbm {

// Comparison slack applied before deterministic tie-breaking.
inline constexpr double kImpurityTol = 1e-12;

enum class MissingDirection { Left, Right };

// Per-class weight sums of a binary-labeled weighted set.
struct ClassWeights {
  double w0 = 0.0;
  double w1 = 0.0;

  void add(int label, double weight) { (label ? w1 : w0) += weight; }
  void remove(int label, double weight) { (label ? w1 : w0) -= weight; }
  double total() const { return w0 + w1; }
  bool empty() const { return !(total() > 0.0); }
  bool pure() const { return w0 <= 0.0 || w1 <= 0.0; }

  double gini() const {
    const double t = total();
    const double p0 = w0 / t;
    const double p1 = w1 / t;
    return 1.0 - p0 * p0 - p1 * p1;
  }

  ClassWeights operator+(const ClassWeights& o) const { return {w0 + o.w0, w1 + o.w1}; }
};

// Class-proportion impurity with proportions taken as weight fractions.
double weighted_gini(std::span<const double> weights, std::span<const int> labels);

// Count-based counterpart (all weights one).
double gini(std::span<const int> labels);

double split_impurity(const ClassWeights& left, const ClassWeights& right);
double split_impurity(std::span<const double> left_w, std::span<const int> left_y,
                      std::span<const double> right_w, std::span<const int> right_y);

struct MissingChoice {
  MissingDirection direction = MissingDirection::Left;
  double impurity = 0.0;
};

// Routes the missing-value subset to whichever side yields the lower split
// impurity; ties go left. An empty missing set degenerates to split_impurity.
MissingChoice missing_split_choice(const ClassWeights& left, const ClassWeights& right,
                                   const ClassWeights& missing);
MissingChoice missing_split_choice(std::span<const double> left_w, std::span<const int> left_y,
                                   std::span<const double> right_w, std::span<const int> right_y,
                                   std::span<const double> miss_w, std::span<const int> miss_y);

}  // namespace ggbm
