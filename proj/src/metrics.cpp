#include "ggbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ggbm {

namespace {

void check_scores(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw ValidationError("metrics: score/label length mismatch");
  if (scores.empty()) throw ValidationError("metrics: empty input");
  for (double s : scores)
    if (!std::isfinite(s)) throw ValidationError("metrics: scores must be finite");
  for (int y : labels)
    if (y != 0 && y != 1) throw ValidationError("metrics: labels must be 0 or 1");
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const int> labels) {
  std::size_t pos = 0, neg = 0;
  for (int y : labels) (y ? pos : neg)++;
  return {pos, neg};
}

// Indices sorted by descending score; ties keep input order.
std::vector<int> descending_order(std::span<const double> scores) {
  std::vector<int> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&scores](int a, int b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_scores(scores, labels);
  auto [pos, neg] = class_counts(labels);
  if (pos == 0 || neg == 0) throw ValidationError("metrics: roc_auc needs both classes");

  // Sum over tie groups in ascending score order: each positive earns the
  // number of lower-ranked negatives plus half the tied ones.
  std::vector<int> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&scores](int a, int b) { return scores[a] < scores[b]; });

  double wins = 0.0;
  double negatives_below = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    double tie_pos = 0, tie_neg = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] ? tie_pos : tie_neg) += 1.0;
      ++j;
    }
    wins += tie_pos * (negatives_below + 0.5 * tie_neg);
    negatives_below += tie_neg;
    i = j;
  }
  return wins / (static_cast<double>(pos) * static_cast<double>(neg));
}

double pr_auc(std::span<const double> scores, std::span<const int> labels) {
  check_scores(scores, labels);
  auto [pos, neg] = class_counts(labels);
  (void)neg;
  if (pos == 0) throw ValidationError("metrics: pr_auc needs at least one positive");

  auto idx = descending_order(scores);
  double tp = 0, fp = 0;
  double prev_recall = 0.0;
  double ap = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] ? tp : fp) += 1.0;
      ++j;
    }
    const double recall = tp / static_cast<double>(pos);
    const double precision = tp / (tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_scores(scores, labels);
  auto [pos, neg] = class_counts(labels);
  if (pos == 0 || neg == 0) throw ValidationError("metrics: roc_curve needs both classes");

  RocCurve curve;
  curve.fpr.push_back(0.0);
  curve.tpr.push_back(0.0);
  auto idx = descending_order(scores);
  double tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] ? tp : fp) += 1.0;
      ++j;
    }
    curve.fpr.push_back(fp / static_cast<double>(neg));
    curve.tpr.push_back(tp / static_cast<double>(pos));
    i = j;
  }
  double auc = 0.0;
  for (std::size_t k = 1; k < curve.fpr.size(); ++k)
    auc += 0.5 * (curve.fpr[k] - curve.fpr[k - 1]) * (curve.tpr[k] + curve.tpr[k - 1]);
  curve.auc = auc;
  return curve;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw ValidationError("metrics: beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  // Continued fraction (modified Lentz); the symmetric form keeps x below the
  // convergence midpoint.
  if (x > (a + 1.0) / (a + b + 2.0))
    return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);

  const double ln_front = a * std::log(x) + b * std::log1p(-x) - std::log(a) + std::lgamma(a + b) -
                          std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(ln_front);

  const double tiny = 1e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;

  for (int m = 1; m <= 500; ++m) {
    const double dm = static_cast<double>(m);
    double numerator = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + numerator * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + numerator / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    result *= d * c;

    numerator = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + numerator * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + numerator / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    result *= delta;
    if (std::abs(delta - 1.0) < 1e-12) break;
  }
  return front * result;
}

double student_t_upper_tail(double t, double df) {
  if (df <= 0) throw ValidationError("metrics: degrees of freedom must be positive");
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0 ? half_tail : 1.0 - half_tail;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw ValidationError("metrics: welch_t_test needs at least 2 samples per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double ma = 0, mb = 0;
  for (double v : a) ma += v;
  for (double v : b) mb += v;
  ma /= na;
  mb /= nb;
  double va = 0, vb = 0;
  for (double v : a) va += (v - ma) * (v - ma);
  for (double v : b) vb += (v - mb) * (v - mb);
  va /= (na - 1.0);
  vb /= (nb - 1.0);
  if (va <= 0.0 && vb <= 0.0) {
    if (ma == mb) return {0.0, 1.0, na + nb - 2.0};
    throw ValidationError("metrics: welch_t_test degenerate variances");
  }

  const double sea = va / na;
  const double seb = vb / nb;
  const double se = std::sqrt(sea + seb);
  const double t = (ma - mb) / se;
  const double df = (sea + seb) * (sea + seb) /
                    (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
  const double p = 2.0 * student_t_upper_tail(std::abs(t), df);
  return {t, std::min(p, 1.0), df};
}

}  // namespace ggbm
