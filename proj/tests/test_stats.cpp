#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mksim/errors.hpp"
#include "mksim/stats.hpp"
#include "oracles.hpp"

using namespace mksim;
using namespace mksim::stats;

TEST_CASE("median") {
  CHECK(median(std::vector<double>{3.0}) == 3.0);
  CHECK(median(std::vector<double>{1.0, 2.0, 5.0}) == 2.0);
  CHECK(median(std::vector<double>{1.0, 2.0, 5.0, 6.0}) == 3.5);
  CHECK_THROWS_AS(median(std::vector<double>{}), StatsError);
}

TEST_CASE("median permutation test: null data") {
  Rng rng(Seed{1});
  const std::vector<double> same{3.0, 3.0, 3.0};
  const TestResult r = median_diff_test(same, same, 1000, rng);
  CHECK(r.effect_size == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK_FALSE(r.df.has_value());
}

TEST_CASE("median permutation test matches exhaustive enumeration") {
  struct Case {
    std::vector<double> a, b;
  };
  const std::vector<Case> cases = {
      {{1, 2}, {10, 11}},
      {{1, 2, 3, 4}, {10, 11, 12, 13}},
      {{1, 5, 9}, {2, 3, 4, 8}},
      {{2, 2, 4}, {2, 4, 4}},
  };
  Rng rng(Seed{2});
  for (const Case& c : cases) {
    const double exact = oracles::exhaustive_median_perm_p(c.a, c.b);
    const TestResult mc = median_diff_test(c.a, c.b, 100'000, rng);
    CHECK(std::fabs(mc.p_value - exact) < 0.02);
  }

  // Smallest worked case: C(4,2) = 6 splits, two of which reach the
  // observed difference of 9.
  CHECK(oracles::exhaustive_median_perm_p({1, 2}, {10, 11}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("paired median permutation test matches its exhaustive oracle") {
  struct Case {
    std::vector<double> on, off;
  };
  const std::vector<Case> cases = {
      {{12, 9, 15, 11}, {10, 8, 13, 11}},
      {{5, 5, 5}, {5, 5, 5}},
      {{50, 42, 61, 48, 55}, {47, 44, 57, 42, 51}},
  };
  Rng rng(Seed{21});
  for (const Case& c : cases) {
    const double exact = oracles::exhaustive_paired_median_perm_p(c.on, c.off);
    const TestResult mc = paired_median_diff_test(c.on, c.off, 100'000, rng);
    CHECK(std::fabs(mc.p_value - exact) < 0.02);
  }
}

TEST_CASE("paired median permutation sees through shared pair noise") {
  // Large per-pair levels, modest constant treatment effect: the paired
  // relabeling detects it while the pooled relabeling cannot.
  Rng data_rng(Seed{77});
  std::vector<double> on, off;
  for (int i = 0; i < 100; ++i) {
    const double level = 200.0 * data_rng.next_uniform();
    off.push_back(level);
    on.push_back(level + 15.0 + 2.0 * data_rng.next_uniform());
  }
  Rng r1(Seed{5});
  Rng r2(Seed{5});
  const TestResult paired = paired_median_diff_test(on, off, 20'000, r1);
  const TestResult pooled = median_diff_test(on, off, 20'000, r2);
  CHECK(paired.p_value < 0.01);
  CHECK(pooled.p_value > paired.p_value);
}

TEST_CASE("paired median permutation contracts") {
  Rng rng(Seed{8});
  const std::vector<double> x{1.0, 2.0};
  CHECK_THROWS_AS(paired_median_diff_test(x, std::vector<double>{1.0}, 10, rng), StatsError);
  CHECK_THROWS_AS(
      paired_median_diff_test(std::vector<double>{}, std::vector<double>{}, 10, rng),
      StatsError);
  CHECK_THROWS_AS(paired_median_diff_test(x, x, 0, rng), StatsError);
}

TEST_CASE("median permutation test contracts") {
  Rng rng(Seed{3});
  const std::vector<double> x{1.0, 2.0};
  CHECK_THROWS_AS(median_diff_test({}, x, 10, rng), StatsError);
  CHECK_THROWS_AS(median_diff_test(x, {}, 10, rng), StatsError);
  CHECK_THROWS_AS(median_diff_test(x, x, 0, rng), StatsError);

  // Injected generator makes results reproducible.
  Rng r1(Seed{77});
  Rng r2(Seed{77});
  const std::vector<double> a{1, 4, 2, 8, 5, 7};
  const std::vector<double> b{2, 9, 4, 3, 8, 8};
  CHECK(median_diff_test(a, b, 5000, r1).p_value == median_diff_test(a, b, 5000, r2).p_value);
}

TEST_CASE("welch t test against the closed form") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{2, 4, 8};
  const TestResult r = welch_t_test(a, b);
  // means 2 and 14/3, variances 1 and 28/3:
  //   t  = (2 - 14/3) / sqrt(1/3 + 28/9) = -8 / sqrt(31)
  //   df = (31/9)^2 / ((1/9)/2 + (784/81)/2) = 1922 / 793
  CHECK(r.statistic == doctest::Approx(-8.0 / std::sqrt(31.0)).epsilon(1e-12));
  CHECK(*r.df == doctest::Approx(1922.0 / 793.0).epsilon(1e-12));
  CHECK(r.effect_size == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value < 1.0);
}

TEST_CASE("welch t test edge behaviour") {
  const std::vector<double> a{1, 2, 3};
  const TestResult same = welch_t_test(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1.0}, a), StatsError);
  const std::vector<double> flat{4, 4, 4};
  CHECK_THROWS_AS(welch_t_test(flat, flat), StatsError);

  // With equal variances and sizes Welch collapses to the pooled t.
  const std::vector<double> c{5, 6, 7};
  const TestResult w = welch_t_test(a, c);
  const double pooled_t = (2.0 - 6.0) / std::sqrt(1.0 * (1.0 / 3 + 1.0 / 3));
  CHECK(w.statistic == doctest::Approx(pooled_t).epsilon(1e-12));
  CHECK(*w.df == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("paired t test against the closed form") {
  const std::vector<double> y1{1, 2, 3};
  const std::vector<double> y2{2, 4, 7};
  const TestResult r = paired_t_test(y1, y2);
  // differences y1 - y2 = (-1, -2, -4): mean -7/3, variance 7/3,
  //   t = (-7/3) / sqrt((7/3)/3) = -sqrt(7)
  CHECK(r.statistic == doctest::Approx(-std::sqrt(7.0)).epsilon(1e-12));
  CHECK(*r.df == 2.0);
  CHECK(r.effect_size == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("paired t test contracts") {
  const std::vector<double> y1{1, 2, 3};
  CHECK_THROWS_AS(paired_t_test(y1, std::vector<double>{1.0, 2.0}), StatsError);

  // A constant offset has zero-variance differences: degenerate certainty.
  const std::vector<double> shifted{3, 4, 5};
  CHECK_THROWS_AS(paired_t_test(y1, shifted), StatsError);
}

TEST_CASE("pairing beats pooling on strongly paired data") {
  // Shared per-pair level with a small treatment effect on top. The paired
  // test conditions the level away; the two-sample test drowns in it.
  Rng rng(Seed{505});
  int paired_no_worse = 0;
  constexpr int kDatasets = 50;
  for (int d = 0; d < kDatasets; ++d) {
    std::vector<double> y1, y2;
    for (int i = 0; i < 40; ++i) {
      const double level = 100.0 * rng.next_uniform();
      y1.push_back(level + rng.next_uniform());
      y2.push_back(level + 0.5 + rng.next_uniform());
    }
    const double p_paired = paired_t_test(y1, y2).p_value;
    const double p_welch = welch_t_test(y1, y2).p_value;
    if (p_paired <= p_welch) ++paired_no_worse;
  }
  CHECK(paired_no_worse >= 48);
}

TEST_CASE("shifting both samples changes no p-value") {
  const std::vector<double> a{3, 9, 4, 7, 6, 1};
  const std::vector<double> b{5, 2, 8, 8, 4, 9, 3};
  const double shift = 12.5;
  std::vector<double> a2 = a, b2 = b;
  for (double& v : a2) v += shift;
  for (double& v : b2) v += shift;

  Rng r1(Seed{42});
  Rng r2(Seed{42});
  CHECK(median_diff_test(a, b, 20'000, r1).p_value ==
        median_diff_test(a2, b2, 20'000, r2).p_value);
  CHECK(welch_t_test(a, b).p_value ==
        doctest::Approx(welch_t_test(a2, b2).p_value).epsilon(1e-12));

  const std::vector<double> y1{1, 5, 3, 9, 2, 7};
  const std::vector<double> y2{2, 4, 6, 11, 2, 9};
  std::vector<double> y1s = y1, y2s = y2;
  for (double& v : y1s) v += shift;
  for (double& v : y2s) v += shift;
  CHECK(paired_t_test(y1, y2).p_value ==
        doctest::Approx(paired_t_test(y1s, y2s).p_value).epsilon(1e-12));
}

TEST_CASE("ols recovers an exact linear relationship") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y(5), ones(5, 1.0);
  for (std::size_t i = 0; i < 5; ++i) y[i] = 3.0 + 2.0 * x[i];
  const RegressionFit fit = ols(y, {{"intercept", ones}, {"x", x}});
  CHECK(fit.terms[0].estimate == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.terms[1].estimate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.residual_stddev == doctest::Approx(0.0));
  CHECK(fit.residual_df == 3);
}

TEST_CASE("ols matches hand-solved normal equations") {
  const std::vector<double> ones{1, 1, 1, 1, 1};
  const std::vector<double> x1{1, 2, 3, 4, 5};
  const std::vector<double> x2{2, 1, 4, 3, 5};
  const std::vector<double> y{3.1, 4.9, 7.2, 9.8, 11.1};

  // Normal equations assembled by hand, solved in extended precision.
  long double gram[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  long double rhs[3] = {0, 0, 0};
  const std::vector<double>* cols[3] = {&ones, &x1, &x2};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j)
      for (std::size_t row = 0; row < 5; ++row)
        gram[i][j] += static_cast<long double>((*cols[i])[row]) * (*cols[j])[row];
    for (std::size_t row = 0; row < 5; ++row)
      rhs[i] += static_cast<long double>((*cols[i])[row]) * y[row];
  }
  const auto expected = oracles::cramer3(gram, rhs);

  const RegressionFit fit = ols(y, {{"intercept", ones}, {"x1", x1}, {"x2", x2}});
  for (int i = 0; i < 3; ++i) {
    const double want = static_cast<double>(expected[static_cast<std::size_t>(i)]);
    CHECK(std::fabs(fit.terms[static_cast<std::size_t>(i)].estimate - want) <=
          1e-10 * std::max(1.0, std::fabs(want)));
  }
  for (const auto& term : fit.terms) {
    CHECK(term.t_value == doctest::Approx(term.estimate / term.std_error).epsilon(1e-12));
  }
  CHECK(fit.residual_df == 2);
}

TEST_CASE("ols residuals are orthogonal to every predictor") {
  Rng rng(Seed{606});
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 10 + rng.next_int_below(40);
    std::vector<double> ones(n, 1.0), x1(n), x2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = 10.0 * rng.next_uniform();
      x2[i] = -5.0 + 7.0 * rng.next_uniform();
      y[i] = 2.0 + 0.7 * x1[i] - 1.3 * x2[i] + rng.next_uniform();
    }
    const RegressionFit fit = ols(y, {{"intercept", ones}, {"x1", x1}, {"x2", x2}});
    const std::vector<const std::vector<double>*> cols{&ones, &x1, &x2};
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += y[i] * y[i];
    for (const auto* col : cols) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double fitted = fit.terms[0].estimate * ones[i] +
                              fit.terms[1].estimate * x1[i] +
                              fit.terms[2].estimate * x2[i];
        dot += (y[i] - fitted) * (*col)[i];
      }
      CHECK(std::fabs(dot) < 1e-8 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("ols contracts") {
  const std::vector<double> ones{1, 1, 1};
  const std::vector<double> y{1, 2, 3};
  CHECK_THROWS_AS(ols(y, {{"a", ones}, {"b", ones}}), StatsError);  // rank deficient
  CHECK_THROWS_AS(ols(std::vector<double>{1.0, 2.0},
                      {{"a", {1.0, 1.0}}, {"b", {0.0, 1.0}}}),
                  StatsError);  // no residual degrees of freedom
}

TEST_CASE("paired coefficient estimator on a known tiny dataset") {
  PairedDataset data;
  data.push_row(5.2, 80, 82);
  data.push_row(3.9, 73, 78);
  data.push_row(9.8, 56, 57);
  const PairedCoefficient est = paired_coefficient(data);

  // |mean(80,73,56) - mean(82,78,57)| = 8/3; sd(-2,-5,-1) = sqrt(13/3).
  CHECK(est.coefficient == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
  CHECK(est.std_error == doctest::Approx(std::sqrt(13.0 / 3.0)).epsilon(1e-12));
  CHECK(est.intercept ==
        doctest::Approx((80.0 + 73.0 + 56.0) / 3.0 - (8.0 / 3.0) * (18.9 / 3.0))
            .epsilon(1e-12));

  // Pearson r recomputed by hand for (x, y_off).
  const double mx = 18.9 / 3.0, my = 209.0 / 3.0;
  double sxx = 0, syy = 0, sxy = 0;
  const double xs[3] = {5.2, 3.9, 9.8}, ys[3] = {80, 73, 56};
  for (int i = 0; i < 3; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double r = sxy / std::sqrt(sxx * syy);
  CHECK(est.pearson_r == doctest::Approx(r).epsilon(1e-12));
  const double t = r * std::sqrt(1.0 / (1.0 - r * r));
  CHECK(est.pearson_t == doctest::Approx(t).epsilon(1e-12));
  CHECK(est.p_value == doctest::Approx(2.0 * t_sf(std::fabs(t), 1.0)).epsilon(1e-12));
}

TEST_CASE("paired coefficient edge cases") {
  PairedDataset same;
  same.push_row(1.0, 10, 10);
  same.push_row(2.0, 14, 14);
  same.push_row(3.0, 12, 12);
  CHECK(paired_coefficient(same).coefficient == 0.0);

  PairedDataset tiny;
  tiny.push_row(1.0, 10, 11);
  CHECK_THROWS_AS(paired_coefficient(tiny), StatsError);

  PairedDataset flat_x;
  flat_x.push_row(2.0, 10, 11);
  flat_x.push_row(2.0, 12, 14);
  flat_x.push_row(2.0, 11, 12);
  CHECK_THROWS_AS(paired_coefficient(flat_x), StatsError);
}

TEST_CASE("t distribution survival function") {
  CHECK(t_sf(0.0, 1.0) == 0.5);
  CHECK(t_sf(0.0, 100.0) == 0.5);

  // With one degree of freedom the t distribution is Cauchy: P(T > 1) = 1/4.
  CHECK(t_sf(1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-10));

  // Published table values.
  CHECK(std::fabs(t_sf(2.0, 10.0) - 0.0367) < 1e-3);
  CHECK(std::fabs(t_sf(2.228, 10.0) - 0.025) < 1e-4);
  CHECK(std::fabs(t_sf(12.706, 1.0) - 0.025) < 1e-5);

  // Large df converges to the normal tail.
  CHECK(std::fabs(t_sf(1.96, 1e7) - 0.0249979) < 1e-4);

  // Symmetry and extremes.
  CHECK(t_sf(-1.3, 7.0) == doctest::Approx(1.0 - t_sf(1.3, 7.0)).epsilon(1e-12));
  CHECK(t_sf(std::numeric_limits<double>::infinity(), 5.0) == 0.0);
  CHECK_THROWS_AS(t_sf(1.0, 0.0), StatsError);
  CHECK_THROWS_AS(t_sf(1.0, -3.0), StatsError);
}

TEST_CASE("regularized incomplete beta sanity") {
  // I_x(1,1) is the identity; I_x(2,2) = 3x^2 - 2x^3.
  for (const double x : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
    CHECK(incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(incomplete_beta(2.0, 2.0, x) ==
          doctest::Approx(3 * x * x - 2 * x * x * x).epsilon(1e-10));
  }
  // Reflection identity.
  CHECK(incomplete_beta(3.5, 1.25, 0.37) ==
        doctest::Approx(1.0 - incomplete_beta(1.25, 3.5, 0.63)).epsilon(1e-10));
}
