#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mksim/rng.hpp"

namespace mksim::stats {

// Outcome of a two-group or paired hypothesis test. df is present only for
// t-family tests.
struct TestResult {
  std::string method;
  double effect_size = 0.0;  // in units of the outcome
  double statistic = 0.0;
  std::optional<double> df;
  double p_value = 1.0;
};

struct RegressionTerm {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double t_value = 0.0;
  double p_value = 1.0;
};

struct RegressionFit {
  std::vector<RegressionTerm> terms;
  std::size_t n = 0;
  std::size_t residual_df = 0;
  double residual_stddev = 0.0;
};

struct Column {
  std::string name;
  std::vector<double> values;
};

// Rows of paired outcomes: a covariate, the outcome with the treatment off
// and the outcome with it on. snapshot_paired records that both outcomes in
// every row came from bit-identical pre-treatment states.
struct PairedDataset {
  std::vector<double> x;
  std::vector<double> y_off;
  std::vector<double> y_on;
  bool snapshot_paired = false;

  void push_row(double covariate, double off, double on) {
    x.push_back(covariate);
    y_off.push_back(off);
    y_on.push_back(on);
  }
  std::size_t size() const { return x.size(); }
};

// Regression-style summary computed directly from paired runs: the
// coefficient is the absolute difference of the two arms' outcome means per
// unit of treatment, the standard error is the standard deviation of the
// per-pair differences, and the p-value comes from a Pearson correlation
// test between the covariate and the untreated outcome.
struct PairedCoefficient {
  double intercept = 0.0;
  double coefficient = 0.0;
  double std_error = 0.0;
  double p_value = 1.0;
  double pearson_r = 0.0;
  double pearson_t = 0.0;
  std::size_t n = 0;
};

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);  // n-1 denominator
double median(std::span<const double> v);

// Permutation test for a difference of medians between two independent
// samples. The effect size is the absolute difference of the sample medians;
// the p-value is the share of n_perm pooled relabelings (re-split at the
// original sizes) whose absolute median difference is at least the observed
// one.
TestResult median_diff_test(std::span<const double> a, std::span<const double> b,
                            std::size_t n_perm, Rng& rng);

// Permutation test for a difference of medians between the two arms of a
// paired design. The statistic is the same; the null distribution swaps the
// two outcomes within each pair independently, so between-pair variation
// never enters. A no-effect treatment makes the arms exchangeable pair by
// pair, which is exactly what the relabeling samples.
TestResult paired_median_diff_test(std::span<const double> y_on,
                                   std::span<const double> y_off, std::size_t n_perm,
                                   Rng& rng);

// Two-sample t-test without the equal-variance assumption
// (Welch-Satterthwaite degrees of freedom), two-sided.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

// One-sample t-test on the per-pair differences y1 - y2, two-sided, with
// n_pairs - 1 degrees of freedom.
TestResult paired_t_test(std::span<const double> y1, std::span<const double> y2);

// Ordinary least squares via the normal equations. The caller supplies the
// full design, intercept column included. Standard errors come from the
// residual variance times the inverse Gram diagonal; p-values are two-sided
// with n - k degrees of freedom.
RegressionFit ols(std::span<const double> y, const std::vector<Column>& design);

PairedCoefficient paired_coefficient(const PairedDataset& data);

// Pearson product-moment correlation; throws StatsError when x has zero
// variance. Zero variance in y yields r = 0.
double pearson_r(std::span<const double> x, std::span<const double> y);

// Upper-tail probability P(T > t) of Student's t with df > 0, via the
// regularized incomplete beta function, accurate to better than 1e-8.
double t_sf(double t, double df);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

}  // namespace mksim::stats
