#include "mksim/reports.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mksim {

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

void append_test_row(std::string& out, const stats::TestResult& r) {
  out += fmt("  %-22s effect %10.4f   stat %10.4f   ", r.method.c_str(), r.effect_size,
             r.statistic);
  if (r.df)
    out += fmt("df %8.2f   ", *r.df);
  else
    out += "df        -   ";
  out += fmt("p %.6f\n", r.p_value);
}

std::string header(const char* title, std::uint64_t seed, std::uint64_t digest) {
  std::string out;
  out += title;
  out += '\n';
  out += fmt("seed %llu   config digest %016llx\n",
             static_cast<unsigned long long>(seed), static_cast<unsigned long long>(digest));
  return out;
}

}  // namespace

ShockAnalysis analyze_shock(const stats::PairedDataset& paired, const UnpairedSamples& unpaired,
                            std::size_t n_perm, Rng& rng) {
  ShockAnalysis a;
  a.n_pairs = paired.size();
  a.n_unpaired = unpaired.on.size() + unpaired.off.size();
  a.paired_median = stats::paired_median_diff_test(paired.y_on, paired.y_off, n_perm, rng);
  a.paired_median_signed_effect =
      stats::median(paired.y_on) - stats::median(paired.y_off);
  a.paired_t = stats::paired_t_test(paired.y_on, paired.y_off);
  a.unpaired_median = stats::median_diff_test(unpaired.on, unpaired.off, n_perm, rng);
  a.unpaired_welch = stats::welch_t_test(unpaired.on, unpaired.off);
  return a;
}

std::string render_shock_report(const ShockAnalysis& a, std::uint64_t seed,
                                std::uint64_t config_digest) {
  std::string out = header("attitude shock campaign", seed, config_digest);
  out += fmt("paired design: %zu pairs (%zu datapoints)\n", a.n_pairs, 2 * a.n_pairs);
  append_test_row(out, a.paired_median);
  out += fmt("  %-22s signed %10.4f   (median on - median off)\n", "median direction",
             a.paired_median_signed_effect);
  append_test_row(out, a.paired_t);
  out += fmt("unpaired design: %zu datapoints\n", a.n_unpaired);
  append_test_row(out, a.unpaired_median);
  append_test_row(out, a.unpaired_welch);
  return out;
}

std::string render_accidents_paired_report(const stats::PairedDataset& data,
                                           const stats::PairedCoefficient& estimate,
                                           std::uint64_t seed, std::uint64_t config_digest) {
  std::string out = header("factory accidents, paired design", seed, config_digest);
  out += fmt("%zu pairs (%zu datapoints); outcomes from identical pre-treatment states: %s\n",
             data.size(), 2 * data.size(), data.snapshot_paired ? "yes" : "no");
  out += "  first rows (fatigue, accidents off, accidents on):\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(data.size(), 3); ++i)
    out += fmt("    %8.2f %8.0f %8.0f\n", data.x[i], data.y_off[i], data.y_on[i]);
  out += fmt("  intercept   %10.4f\n", estimate.intercept);
  out += fmt("  coefficient %10.4f   (per unit of treatment)\n", estimate.coefficient);
  out += fmt("  std error   %10.4f\n", estimate.std_error);
  out += fmt("  p-value     %10.6f   (Pearson correlation test, r = %.4f)\n",
             estimate.p_value, estimate.pearson_r);
  out += "  no clothing estimate is reported: clothing is held fixed by construction\n";
  return out;
}

namespace {

void append_fit(std::string& out, const char* title, const stats::RegressionFit& fit) {
  out += title;
  out += '\n';
  out += fmt("  %-12s %12s %12s %10s %10s\n", "term", "estimate", "std. error", "t-value",
             "p-value");
  for (const auto& term : fit.terms)
    out += fmt("  %-12s %12.4f %12.4f %10.2f %10.6f\n", term.name.c_str(), term.estimate,
               term.std_error, term.t_value, term.p_value);
  out += fmt("  n = %zu, residual df = %zu\n", fit.n, fit.residual_df);
}

}  // namespace

std::string render_observational_report(const stats::RegressionFit& with_clothing,
                                        const stats::RegressionFit& fatigue_only,
                                        std::uint64_t seed, std::uint64_t config_digest) {
  std::string out = header("factory accidents, observational regressions", seed, config_digest);
  append_fit(out, "controlling for clothing:", with_clothing);
  append_fit(out, "fatigue only:", fatigue_only);
  return out;
}

std::pair<stats::RegressionFit, stats::RegressionFit> fit_observational(
    const std::vector<ObservationalRow>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> y(n), ones(n, 1.0), fatigue(n), clothing(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rows[i].accidents;
    fatigue[i] = rows[i].fatigue;
    clothing[i] = rows[i].clothing;
  }
  stats::RegressionFit with_clothing = stats::ols(
      y, {{"intercept", ones}, {"fatigue", fatigue}, {"clothing", clothing}});
  stats::RegressionFit fatigue_only =
      stats::ols(y, {{"intercept", ones}, {"fatigue", fatigue}});
  return {std::move(with_clothing), std::move(fatigue_only)};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_run_meta(const std::filesystem::path& path, std::uint64_t seed,
                    std::uint64_t config_digest, const std::string& timestamp) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << "seed = " << seed << '\n';
  f << "config_digest = " << fmt("%016llx", static_cast<unsigned long long>(config_digest))
    << '\n';
  f << "timestamp = " << timestamp << '\n';
}

}  // namespace mksim
