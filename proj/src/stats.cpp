#include "mksim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mksim/errors.hpp"

namespace mksim::stats {

namespace {

// Median of a scratch buffer; reorders it.
double median_inplace(std::span<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double lbeta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 3.0e-16;
  constexpr double kTiny = 1.0e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

}  // namespace

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  const double m = mean(v);
  double ss = 0.0;
  for (const double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double median(std::span<const double> v) {
  if (v.empty()) throw StatsError("median: empty sample");
  std::vector<double> scratch(v.begin(), v.end());
  return median_inplace(scratch);
}

TestResult median_diff_test(std::span<const double> a, std::span<const double> b,
                            std::size_t n_perm, Rng& rng) {
  if (a.empty() || b.empty()) throw StatsError("median_diff_test: empty sample");
  if (n_perm == 0) throw StatsError("median_diff_test: need at least one permutation");

  const double observed = std::fabs(median(a) - median(b));

  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::span<double> pool(pooled);
  const std::span<double> first = pool.first(a.size());
  const std::span<double> rest = pool.subspan(a.size());

  std::size_t at_least = 0;
  for (std::size_t i = 0; i < n_perm; ++i) {
    shuffle(rng, pool);
    const double diff = std::fabs(median_inplace(first) - median_inplace(rest));
    if (diff >= observed) ++at_least;
  }

  TestResult r;
  r.method = "median permutation";
  r.effect_size = observed;
  r.statistic = observed;
  r.p_value = static_cast<double>(at_least) / static_cast<double>(n_perm);
  return r;
}

TestResult paired_median_diff_test(std::span<const double> y_on,
                                   std::span<const double> y_off, std::size_t n_perm,
                                   Rng& rng) {
  if (y_on.size() != y_off.size())
    throw StatsError("paired_median_diff_test: length mismatch");
  if (y_on.empty()) throw StatsError("paired_median_diff_test: empty sample");
  if (n_perm == 0) throw StatsError("paired_median_diff_test: need at least one permutation");

  const std::size_t n = y_on.size();
  const double observed = std::fabs(median(y_on) - median(y_off));

  std::vector<double> a(n), b(n);
  std::size_t at_least = 0;
  for (std::size_t perm = 0; perm < n_perm; ++perm) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool swap_pair = (rng.next_word() & 1u) != 0;
      a[i] = swap_pair ? y_off[i] : y_on[i];
      b[i] = swap_pair ? y_on[i] : y_off[i];
    }
    const double diff = std::fabs(median_inplace(a) - median_inplace(b));
    if (diff >= observed) ++at_least;
  }

  TestResult r;
  r.method = "paired median permutation";
  r.effect_size = observed;
  r.statistic = observed;
  r.p_value = static_cast<double>(at_least) / static_cast<double>(n_perm);
  return r;
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw StatsError("welch_t_test: need at least two values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  if (va == 0.0 && vb == 0.0)
    throw StatsError("welch_t_test: both samples are degenerate (zero variance)");

  const double sa = va / na;
  const double sb = vb / nb;
  const double t = (ma - mb) / std::sqrt(sa + sb);
  const double df =
      (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));

  TestResult r;
  r.method = "welch t";
  r.effect_size = std::fabs(ma - mb);
  r.statistic = t;
  r.df = df;
  r.p_value = 2.0 * t_sf(std::fabs(t), df);
  return r;
}

TestResult paired_t_test(std::span<const double> y1, std::span<const double> y2) {
  if (y1.size() != y2.size()) throw StatsError("paired_t_test: length mismatch");
  const std::size_t n = y1.size();
  if (n < 2) throw StatsError("paired_t_test: need at least two pairs");

  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = y1[i] - y2[i];
  const double md = mean(diff);
  const double vd = sample_variance(diff);
  if (vd == 0.0)
    throw StatsError("paired_t_test: zero-variance differences");

  const double t = md / std::sqrt(vd / static_cast<double>(n));
  const double df = static_cast<double>(n - 1);

  TestResult r;
  r.method = "paired t";
  r.effect_size = std::fabs(md);
  r.statistic = t;
  r.df = df;
  r.p_value = 2.0 * t_sf(std::fabs(t), df);
  return r;
}

RegressionFit ols(std::span<const double> y, const std::vector<Column>& design) {
  const std::size_t n = y.size();
  const std::size_t k = design.size();
  if (k == 0) throw StatsError("ols: empty design");
  for (const Column& c : design)
    if (c.values.size() != n) throw StatsError("ols: column length mismatch");
  if (n <= k) throw StatsError("ols: need more observations than terms");

  // Gram matrix and right-hand side of the normal equations.
  std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
  std::vector<double> rhs(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t row = 0; row < n; ++row)
        dot += design[i].values[row] * design[j].values[row];
      gram[i][j] = gram[j][i] = dot;
    }
    double dot = 0.0;
    for (std::size_t row = 0; row < n; ++row) dot += design[i].values[row] * y[row];
    rhs[i] = dot;
  }

  // Invert the Gram matrix by Gauss-Jordan with partial pivoting.
  double scale = 0.0;
  for (std::size_t i = 0; i < k; ++i) scale = std::max(scale, std::fabs(gram[i][i]));
  const double tolerance = std::max(scale, 1.0) * 1e-12;

  std::vector<std::vector<double>> inv(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1.0;
  auto work = gram;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < k; ++row)
      if (std::fabs(work[row][col]) > std::fabs(work[pivot][col])) pivot = row;
    if (std::fabs(work[pivot][col]) <= tolerance)
      throw StatsError("ols: design matrix is rank deficient");
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    const double inv_pivot = 1.0 / work[col][col];
    for (std::size_t j = 0; j < k; ++j) {
      work[col][j] *= inv_pivot;
      inv[col][j] *= inv_pivot;
    }
    for (std::size_t row = 0; row < k; ++row) {
      if (row == col) continue;
      const double factor = work[row][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        work[row][j] -= factor * work[col][j];
        inv[row][j] -= factor * inv[col][j];
      }
    }
  }

  std::vector<double> beta(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) beta[i] += inv[i][j] * rhs[j];

  double rss = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    double fitted = 0.0;
    for (std::size_t i = 0; i < k; ++i) fitted += beta[i] * design[i].values[row];
    const double resid = y[row] - fitted;
    rss += resid * resid;
  }
  rss = std::max(rss, 0.0);

  const std::size_t residual_df = n - k;
  const double sigma2 = rss / static_cast<double>(residual_df);

  RegressionFit fit;
  fit.n = n;
  fit.residual_df = residual_df;
  fit.residual_stddev = std::sqrt(sigma2);
  fit.terms.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    RegressionTerm term;
    term.name = design[i].name;
    term.estimate = beta[i];
    term.std_error = std::sqrt(sigma2 * inv[i][i]);
    if (term.std_error > 0.0) {
      term.t_value = term.estimate / term.std_error;
      term.p_value = 2.0 * t_sf(std::fabs(term.t_value), static_cast<double>(residual_df));
    } else {
      // Exact fit: an estimate with no residual noise.
      term.t_value = term.estimate == 0.0
                         ? 0.0
                         : std::copysign(std::numeric_limits<double>::infinity(),
                                         term.estimate);
      term.p_value = term.estimate == 0.0 ? 1.0 : 0.0;
    }
    fit.terms.push_back(std::move(term));
  }
  return fit;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StatsError("pearson_r: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw StatsError("pearson_r: need at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw StatsError("pearson_r: zero variance in x");
  if (syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

PairedCoefficient paired_coefficient(const PairedDataset& data) {
  const std::size_t n = data.size();
  if (n < 2) throw StatsError("paired_coefficient: need at least two rows");

  const double m_off = mean(data.y_off);
  const double m_on = mean(data.y_on);

  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = data.y_off[i] - data.y_on[i];

  PairedCoefficient out;
  out.n = n;
  out.coefficient = std::fabs(m_off - m_on);
  out.std_error = std::sqrt(sample_variance(diff));
  out.intercept = m_off - out.coefficient * mean(data.x);

  // Correlation test against the untreated arm.
  out.pearson_r = pearson_r(data.x, data.y_off);
  const double r2 = out.pearson_r * out.pearson_r;
  if (r2 >= 1.0) {
    // Perfect correlation (always the case for exactly two rows).
    out.pearson_t = std::copysign(std::numeric_limits<double>::infinity(), out.pearson_r);
    out.p_value = 0.0;
  } else if (n > 2) {
    const double df = static_cast<double>(n - 2);
    out.pearson_t = out.pearson_r * std::sqrt(df / (1.0 - r2));
    out.p_value = 2.0 * t_sf(std::fabs(out.pearson_t), df);
  } else {
    // Two rows with a degenerate outcome: no evidence either way.
    out.pearson_t = 0.0;
    out.p_value = 1.0;
  }
  return out;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw StatsError("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_sf(double t, double df) {
  if (!(df > 0.0)) throw StatsError("t_sf: df must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t >= 0.0 ? tail : 1.0 - tail;
}

}  // namespace mksim::stats
