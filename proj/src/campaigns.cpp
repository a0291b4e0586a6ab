#include "mksim/campaigns.hpp"

#include "mksim/accidents_model.hpp"
#include "mksim/errors.hpp"
#include "mksim/models.hpp"
#include "mksim/shock_model.hpp"
#include "mksim/simulation.hpp"

namespace mksim {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

Seed derive_seed(Seed base, std::uint64_t replication) {
  return Seed{mix64(base.value + 0x9E3779B97F4A7C15ull * (replication + 1))};
}

stats::PairedDataset run_paired_shock(const CampaignConfig& cfg) {
  require(cfg.model == "shock", "paired shock campaign: model must be 'shock'");
  require(cfg.design == Design::paired, "paired shock campaign: design must be paired");
  require(cfg.replications >= 1, "paired shock campaign: need at least one replication");
  const ShockConfig model_cfg = ShockConfig::from_key_values(cfg.model_config);
  const ModelRegistry& registry = builtin_registry();

  stats::PairedDataset data;
  data.snapshot_paired = true;
  for (std::uint64_t rep = 0; rep < cfg.replications; ++rep) {
    Simulation sim = Simulation::setup(registry, ShockWorld::kModelId, cfg.model_config,
                                       derive_seed(cfg.base_seed, rep));
    sim.run_until(model_cfg.shock_tick);
    const Snapshot at_shock = sim.make_snapshot();

    auto& treated = dynamic_cast<ShockWorld&>(sim.world());
    treated.apply_shock(sim.rng());
    sim.run_until(model_cfg.final_tick);
    const double count_on = static_cast<double>(treated.count_negative());

    Simulation untreated = Simulation::restore(registry, at_shock);
    untreated.run_until(model_cfg.final_tick);
    const double count_off =
        static_cast<double>(dynamic_cast<const ShockWorld&>(untreated.world()).count_negative());

    data.push_row(static_cast<double>(rep), count_off, count_on);
  }
  return data;
}

UnpairedSamples run_unpaired_shock(const CampaignConfig& cfg) {
  require(cfg.model == "shock", "unpaired shock campaign: model must be 'shock'");
  require(cfg.design == Design::unpaired, "unpaired shock campaign: design must be unpaired");
  require(cfg.replications >= 2, "unpaired shock campaign: need at least two replications");
  if (cfg.replications % 2 != 0)
    throw ConfigError("unpaired shock campaign: replication count must be even");
  const ShockConfig model_cfg = ShockConfig::from_key_values(cfg.model_config);
  const ModelRegistry& registry = builtin_registry();

  UnpairedSamples samples;
  const std::uint64_t half = cfg.replications / 2;
  for (std::uint64_t run = 0; run < cfg.replications; ++run) {
    const bool shock_arm = run < half;
    KeyValueConfig kv = cfg.model_config;
    kv.set("shock_enabled", shock_arm ? "true" : "false");

    Simulation sim = Simulation::setup(registry, ShockWorld::kModelId, kv,
                                       derive_seed(cfg.base_seed, run));
    sim.run_until(model_cfg.shock_tick);
    auto& world = dynamic_cast<ShockWorld&>(sim.world());
    world.apply_shock(sim.rng());  // no-op on the unshocked arm
    sim.run_until(model_cfg.final_tick);

    const double count = static_cast<double>(world.count_negative());
    (shock_arm ? samples.on : samples.off).push_back(count);
  }
  return samples;
}

stats::PairedDataset run_paired_accidents(const CampaignConfig& cfg) {
  require(cfg.model == "accidents", "paired accidents campaign: model must be 'accidents'");
  require(cfg.design == Design::paired, "paired accidents campaign: design must be paired");
  require(cfg.replications >= 1, "paired accidents campaign: need at least one replication");
  const FactoryConfig model_cfg = FactoryConfig::from_key_values(cfg.model_config);
  const ModelRegistry& registry = builtin_registry();

  stats::PairedDataset data;
  data.snapshot_paired = true;
  for (std::uint64_t pair = 0; pair < cfg.replications; ++pair) {
    Simulation sim = Simulation::setup(registry, FactoryWorld::kModelId, cfg.model_config,
                                       derive_seed(cfg.base_seed, pair));
    const Snapshot fresh = sim.make_snapshot();  // before the first tick

    sim.run_until(model_cfg.run_length);
    const auto [fatigue_off, accidents_off] =
        dynamic_cast<const FactoryWorld&>(sim.world()).focal_outcome();

    Simulation treated = Simulation::restore(registry, fresh);
    dynamic_cast<FactoryWorld&>(treated.world()).treat_fatigue(model_cfg.treatment_delta);
    treated.run_until(model_cfg.run_length);
    const auto [fatigue_on, accidents_on] =
        dynamic_cast<const FactoryWorld&>(treated.world()).focal_outcome();
    (void)fatigue_on;

    data.push_row(fatigue_off, static_cast<double>(accidents_off),
                  static_cast<double>(accidents_on));
  }
  return data;
}

std::vector<ObservationalRow> run_observational_accidents(const CampaignConfig& cfg) {
  require(cfg.model == "accidents", "observational campaign: model must be 'accidents'");
  require(cfg.replications >= 1, "observational campaign: need at least one run");
  const FactoryConfig model_cfg = FactoryConfig::from_key_values(cfg.model_config);
  const ModelRegistry& registry = builtin_registry();

  std::vector<ObservationalRow> rows;
  rows.reserve(cfg.replications);
  for (std::uint64_t run = 0; run < cfg.replications; ++run) {
    Simulation sim = Simulation::setup(registry, FactoryWorld::kModelId, cfg.model_config,
                                       derive_seed(cfg.base_seed, run));
    sim.run_until(model_cfg.run_length);
    const auto& world = dynamic_cast<const FactoryWorld&>(sim.world());
    const auto [fatigue, accidents] = world.focal_outcome();
    rows.push_back(ObservationalRow{fatigue,
                                    world.agents()[model_cfg.focal_agent].clothing,
                                    static_cast<double>(accidents)});
  }
  return rows;
}

namespace {

ResultTable make_table(std::vector<std::string> columns, const CampaignConfig& cfg) {
  ResultTable t(std::move(columns));
  t.seed = cfg.base_seed.value;
  t.config_digest = cfg.model_config.digest();
  return t;
}

}  // namespace

ResultTable shock_paired_table(const stats::PairedDataset& data, const CampaignConfig& cfg) {
  ResultTable t = make_table({"pair_id", "count_off", "count_on"}, cfg);
  for (std::size_t i = 0; i < data.size(); ++i)
    t.add_row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(data.y_off[i]),
               static_cast<std::int64_t>(data.y_on[i])});
  return t;
}

ResultTable shock_unpaired_table(const UnpairedSamples& samples, const CampaignConfig& cfg) {
  ResultTable t = make_table({"run_id", "arm", "count"}, cfg);
  std::int64_t run_id = 0;
  for (const double v : samples.on)
    t.add_row({run_id++, std::string("on"), static_cast<std::int64_t>(v)});
  for (const double v : samples.off)
    t.add_row({run_id++, std::string("off"), static_cast<std::int64_t>(v)});
  return t;
}

ResultTable accidents_paired_table(const stats::PairedDataset& data, const CampaignConfig& cfg) {
  const double delta = cfg.model_config.get_double_or("treatment_delta", 1.0);
  ResultTable t = make_table(
      {"pair_id", "fatigue", "fatigue_plus1", "accidents_1", "accidents_2"}, cfg);
  for (std::size_t i = 0; i < data.size(); ++i)
    t.add_row({static_cast<std::int64_t>(i), data.x[i], data.x[i] + delta,
               static_cast<std::int64_t>(data.y_off[i]), static_cast<std::int64_t>(data.y_on[i])});
  return t;
}

ResultTable accidents_observational_table(const std::vector<ObservationalRow>& rows,
                                          const CampaignConfig& cfg) {
  ResultTable t = make_table({"run_id", "fatigue", "clothing", "accidents"}, cfg);
  std::int64_t run_id = 0;
  for (const ObservationalRow& r : rows)
    t.add_row({run_id++, r.fatigue, r.clothing, static_cast<std::int64_t>(r.accidents)});
  return t;
}

}  // namespace mksim
