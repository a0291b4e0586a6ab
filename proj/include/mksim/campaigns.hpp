#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mksim/config.hpp"
#include "mksim/rng.hpp"
#include "mksim/stats.hpp"
#include "mksim/table.hpp"

namespace mksim {

enum class Design { paired, unpaired };

// One experiment campaign: which model, which design, how many replications,
// the base seed every per-replication seed derives from, and the model
// parameters.
struct CampaignConfig {
  std::string model;
  Design design = Design::paired;
  std::uint64_t replications = 1;
  Seed base_seed;
  KeyValueConfig model_config;
  std::filesystem::path out_dir;  // optional; campaigns themselves never write
};

// Two independent samples from unpaired runs.
struct UnpairedSamples {
  std::vector<double> on;
  std::vector<double> off;
};

// One observational run's record for the accidents model.
struct ObservationalRow {
  double fatigue = 0.0;
  double clothing = 0.0;
  double accidents = 0.0;
};

// Pure hash of (base seed, replication index). Replications are independent
// of execution order, so serial and parallel campaigns produce identical
// result sets.
Seed derive_seed(Seed base, std::uint64_t replication);

// Per replication: run to the shock tick, snapshot, shock, run out (treated
// count), then restore the snapshot and run out untreated. Everything before
// the shock is shared bit for bit within the pair.
stats::PairedDataset run_paired_shock(const CampaignConfig& cfg);

// Independent runs, half with the shock and half without, each from its own
// derived seed. Rejects odd replication counts.
UnpairedSamples run_unpaired_shock(const CampaignConfig& cfg);

// Per pair: setup, snapshot before the first tick, run out untreated, then
// restore, raise fatigue by the treatment delta and run out again. Records
// the focal agent's (setup fatigue, accidents off, accidents on).
stats::PairedDataset run_paired_accidents(const CampaignConfig& cfg);

// Independent runs; one (fatigue, clothing, accidents) row per run for the
// focal agent.
std::vector<ObservationalRow> run_observational_accidents(const CampaignConfig& cfg);

// CSV table builders (schemas are part of the tool's interface).
ResultTable shock_paired_table(const stats::PairedDataset& data, const CampaignConfig& cfg);
ResultTable shock_unpaired_table(const UnpairedSamples& samples, const CampaignConfig& cfg);
ResultTable accidents_paired_table(const stats::PairedDataset& data, const CampaignConfig& cfg);
ResultTable accidents_observational_table(const std::vector<ObservationalRow>& rows,
                                           const CampaignConfig& cfg);

}  // namespace mksim
