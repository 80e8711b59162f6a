#pragma once

#include <span>
#include <vector>

#include "ggbm/types.hpp"

namespace ggbm {

// Probability that a random positive outranks a random negative, ties worth
// one half (the rank-statistic form).
double roc_auc(std::span<const double> scores, std::span<const int> labels);

// Average precision: stepwise integral of precision over recall.
double pr_auc(std::span<const double> scores, std::span<const int> labels);

struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;  // trapezoid area, equals roc_auc
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

struct WelchResult {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

// Unequal-variance two-sample t-test, two-sided. t = (mean(a) - mean(b)) / se.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b) via continued fraction, |err| <= 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(T > t) of Student's t with df degrees of freedom.
double student_t_upper_tail(double t, double df);

}  // namespace ggbm
