#include <doctest.h>

#include <cmath>
#include <random>

#include "ggbm/metrics.hpp"

using namespace ggbm;

namespace {

// Pairwise definition with half credit for ties.
double pairwise_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      ++pairs;
      if (s[i] > s[j])
        wins += 1.0;
      else if (s[i] == s[j])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("roc_auc on separable, constant and hand-computed fixtures") {
  std::vector<double> perfect{0.1, 0.2, 0.8, 0.9};
  std::vector<int> y{0, 0, 1, 1};
  CHECK(roc_auc(perfect, y) == 1.0);

  std::vector<double> constant{0.5, 0.5, 0.5, 0.5};
  CHECK(roc_auc(constant, y) == 0.5);

  std::vector<double> mixed{0.1, 0.4, 0.35, 0.8};
  std::vector<int> labels{0, 0, 1, 1};
  CHECK(roc_auc(mixed, labels) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("roc_auc equals the pairwise oracle on random fixtures with ties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 19);
    std::vector<double> s(n);
    std::vector<int> y(n);
    bool have0 = false, have1 = false;
    for (int i = 0; i < n; ++i) {
      s[i] = std::floor(unif(rng) * 6.0) / 6.0;  // coarse grid forces ties
      y[i] = static_cast<int>(rng() % 2);
      (y[i] ? have1 : have0) = true;
    }
    if (!have0 || !have1) continue;
    CHECK(std::abs(roc_auc(s, y) - pairwise_auc(s, y)) <= 1e-12);
  }
}

TEST_CASE("roc_auc is invariant under strictly increasing transforms") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> s(50);
  std::vector<int> y(50);
  for (int i = 0; i < 50; ++i) {
    s[i] = unif(rng);
    y[i] = static_cast<int>(rng() % 2);
  }
  y[0] = 0;
  y[1] = 1;
  std::vector<double> t(50);
  for (int i = 0; i < 50; ++i) t[i] = std::exp(3.0 * s[i]) + 1.0;
  CHECK(roc_auc(s, y) == doctest::Approx(roc_auc(t, y)).epsilon(1e-15));
}

TEST_CASE("negating tie-free scores complements the auc") {
  std::vector<double> s{0.11, 0.35, 0.62, 0.48, 0.93, 0.27};
  std::vector<int> y{0, 1, 0, 1, 1, 0};
  std::vector<double> neg(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) neg[i] = -s[i];
  CHECK(roc_auc(s, y) + roc_auc(neg, y) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("roc_auc input validation") {
  std::vector<double> s{0.1, 0.2};
  std::vector<int> ones{1, 1};
  CHECK_THROWS_AS(roc_auc(s, ones), ValidationError);
  std::vector<double> inf{0.1, std::numeric_limits<double>::infinity()};
  std::vector<int> y{0, 1};
  CHECK_THROWS_AS(roc_auc(inf, y), ValidationError);
}

TEST_CASE("pr_auc on degenerate and sampled fixtures") {
  std::vector<double> perfect{0.9, 0.8, 0.2, 0.1};
  std::vector<int> y{1, 1, 0, 0};
  CHECK(pr_auc(perfect, y) == 1.0);

  std::vector<double> one_top{0.9, 0.5, 0.4, 0.3};
  std::vector<int> single{1, 0, 0, 0};
  CHECK(pr_auc(one_top, single) == 1.0);

  // random scores converge to the prevalence
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 20000;
  const double prevalence = 0.3;
  std::vector<double> s(n);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    s[i] = unif(rng);
    labels[i] = unif(rng) < prevalence ? 1 : 0;
  }
  CHECK(pr_auc(s, labels) == doctest::Approx(prevalence).epsilon(0.05));

  std::vector<int> none{0, 0, 0, 0};
  CHECK_THROWS_AS(pr_auc(perfect, none), ValidationError);
}

TEST_CASE("roc_curve endpoints, frozen small case, and auc consistency") {
  std::vector<double> two{0.9, 0.1};
  std::vector<int> y2{1, 0};
  RocCurve curve = roc_curve(two, y2);
  REQUIRE(curve.fpr.size() == 3);
  CHECK(curve.fpr == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(curve.tpr == std::vector<double>{0.0, 1.0, 1.0});
  CHECK(curve.auc == 1.0);

  RocCurve reversed = roc_curve(std::vector<double>{0.1, 0.9}, y2);
  CHECK(reversed.auc == 0.0);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    std::vector<double> s(n);
    std::vector<int> labels(n);
    bool have0 = false, have1 = false;
    for (int i = 0; i < n; ++i) {
      s[i] = std::floor(unif(rng) * 5.0) / 5.0;
      labels[i] = static_cast<int>(rng() % 2);
      (labels[i] ? have1 : have0) = true;
    }
    if (!have0 || !have1) continue;
    RocCurve c = roc_curve(s, labels);
    CHECK(c.fpr.front() == 0.0);
    CHECK(c.tpr.front() == 0.0);
    CHECK(c.fpr.back() == 1.0);
    CHECK(c.tpr.back() == 1.0);
    for (std::size_t k = 1; k < c.fpr.size(); ++k) {
      CHECK(c.fpr[k] >= c.fpr[k - 1]);
      CHECK(c.tpr[k] >= c.tpr[k - 1]);
    }
    CHECK(std::abs(c.auc - roc_auc(s, labels)) <= 1e-12);
  }
}

TEST_CASE("welch t test equal samples and frozen hand computation") {
  std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(welch_t_test(a, a).t == 0.0);
  CHECK(welch_t_test(a, a).p == 1.0);

  std::vector<double> b{4.0, 5.0, 6.0};
  WelchResult res = welch_t_test(a, b);
  CHECK(res.t == doctest::Approx(-3.6742346141747673).epsilon(1e-12));
  CHECK(res.df == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(res.p == doctest::Approx(0.021311641128756727).epsilon(1e-8));
  CHECK(std::abs(res.p - 0.0214) < 1e-3);

  WelchResult swapped = welch_t_test(b, a);
  CHECK(swapped.t == doctest::Approx(-res.t).epsilon(1e-15));
  CHECK(swapped.p == doctest::Approx(res.p).epsilon(1e-12));
}

TEST_CASE("welch t test input validation") {
  std::vector<double> tiny{1.0};
  std::vector<double> ok{1.0, 2.0};
  CHECK_THROWS_AS(welch_t_test(tiny, ok), ValidationError);
  std::vector<double> const_a{2.0, 2.0};
  std::vector<double> const_b{3.0, 3.0};
  CHECK_THROWS_AS(welch_t_test(const_a, const_b), ValidationError);
}

TEST_CASE("incomplete beta against closed forms") {
  // I_x(1, 1) = x
  for (double x : {0.1, 0.25, 0.5, 0.75, 0.9})
    CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-10));
  // I_x(2, 1) = x^2
  CHECK(regularized_incomplete_beta(2.0, 1.0, 0.3) == doctest::Approx(0.09).epsilon(1e-10));
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(regularized_incomplete_beta(3.5, 1.25, 0.4) ==
        doctest::Approx(1.0 - regularized_incomplete_beta(1.25, 3.5, 0.6)).epsilon(1e-10));
}

TEST_CASE("student upper tail matches known t quantiles") {
  // P(T_4 > 2.776) ~= 0.025, P(T_10 > 1.812) ~= 0.05
  CHECK(student_t_upper_tail(2.7764451051977987, 4.0) == doctest::Approx(0.025).epsilon(1e-6));
  CHECK(student_t_upper_tail(1.8124611228107335, 10.0) == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(student_t_upper_tail(0.0, 7.0) == doctest::Approx(0.5).epsilon(1e-12));
}
