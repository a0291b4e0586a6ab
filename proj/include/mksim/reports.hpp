#pragma once

#include <filesystem>
#include <string>

#include "mksim/campaigns.hpp"
#include "mksim/stats.hpp"

namespace mksim {

// Summary statistics for the shock campaigns: permutation median tests and
// t-tests for the paired and the unpaired design side by side.
struct ShockAnalysis {
  stats::TestResult paired_median;
  stats::TestResult paired_t;
  double paired_median_signed_effect = 0.0;  // median(on) - median(off)
  stats::TestResult unpaired_median;
  stats::TestResult unpaired_welch;
  std::size_t n_pairs = 0;
  std::size_t n_unpaired = 0;
};

ShockAnalysis analyze_shock(const stats::PairedDataset& paired, const UnpairedSamples& unpaired,
                            std::size_t n_perm, Rng& rng);

// Renderers produce aligned plain text. Every report opens with the seed and
// the config digest so it can be traced to its exact inputs.
std::string render_shock_report(const ShockAnalysis& a, std::uint64_t seed,
                                std::uint64_t config_digest);

std::string render_accidents_paired_report(const stats::PairedDataset& data,
                                           const stats::PairedCoefficient& estimate,
                                           std::uint64_t seed, std::uint64_t config_digest);

std::string render_observational_report(const stats::RegressionFit& with_clothing,
                                        const stats::RegressionFit& fatigue_only,
                                        std::uint64_t seed, std::uint64_t config_digest);

// Fits both observational regressions: accidents on (intercept, fatigue,
// clothing) and accidents on (intercept, fatigue).
std::pair<stats::RegressionFit, stats::RegressionFit> fit_observational(
    const std::vector<ObservationalRow>& rows);

// Seed / digest / timestamp side-car, the only artifact that is not
// byte-reproducible across runs.
void write_run_meta(const std::filesystem::path& path, std::uint64_t seed,
                    std::uint64_t config_digest, const std::string& timestamp);

// Writes exactly the given bytes; throws on any I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mksim
