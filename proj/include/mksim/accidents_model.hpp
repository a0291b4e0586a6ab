#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mksim/config.hpp"
#include "mksim/world.hpp"

namespace mksim {

// Parameters of the factory accidents model.
// Config keys: agents, grid_w, grid_h, run_length, focal_agent,
// treatment_delta.
struct FactoryConfig {
  std::uint32_t n_agents = 100;
  std::uint32_t grid_w = 10;
  std::uint32_t grid_h = 10;
  std::uint64_t run_length = 100;
  std::uint32_t focal_agent = 0;  // the agent whose outcome a run reports
  double treatment_delta = 1.0;   // fatigue units added by the treatment

  static FactoryConfig from_key_values(const KeyValueConfig& kv);
  void validate() const;

  bool operator==(const FactoryConfig&) const = default;
};

// One worker. Clothing is written once at setup and never read by any rule:
// it is caused by age and weather but causes nothing, which is exactly the
// structure that makes it a bad statistical control.
struct WorkerAgent {
  std::uint32_t age = 0;          // years
  double clothing = 0.0;          // weight units
  double fatigue = 0.0;           // fatigue units
  double baseline_fatigue = 0.0;  // fatigue returns here after an accident
  std::uint32_t accidents = 0;
  std::uint32_t cell = 0;  // row-major factory cell

  bool operator==(const WorkerAgent&) const = default;
};

// Chance of an accident in one tick:
//   threshold part: fatigue / 10 when fatigue > 10 * danger, else 0
//   chance = min(1, 0.5 * threshold_part + 0.2 * weather)
double accident_chance(double fatigue, double danger, double weather);

// Workers wander a factory whose areas carry fixed danger values under fixed
// weather. Accidents come from fatigue exceeding the local danger threshold
// and from the weather itself; each accident resets fatigue to its baseline.
class FactoryWorld final : public World {
 public:
  static constexpr std::string_view kModelId = "accidents";

  // Setup draws, in order: weather, the danger grid (row-major), then per
  // agent its age, clothing noise, fatigue noise and starting cell.
  //   clothing = 1 + 2*age_norm + 3*weather + e_c,  e_c ~ U[-0.25, 0.25]
  //   fatigue  = baseline = 2 + 6*age_norm + e_f,   e_f ~ U[0, 2]
  // with age ~ U{18..65} and age_norm = (age - 18) / 47.
  FactoryWorld(const FactoryConfig& config, Rng& rng);

  std::string_view model_id() const override { return kModelId; }
  std::size_t agent_count() const override { return agents_.size(); }
  void agent_act(std::size_t agent, Rng& rng) override;
  void save(ByteWriter& out) const override;
  std::unique_ptr<World> clone() const override;

  static std::unique_ptr<FactoryWorld> load(ByteReader& in);

  // accident_chance evaluated for the agent where it currently stands.
  double accident_probability(std::size_t agent) const;

  // Move to one of the four adjacent cells (toroidal), then run the accident
  // check. An accident bumps the count and resets fatigue to baseline;
  // otherwise fatigue grows by 0.05. Consumes exactly two draws either way.
  void worker_tick(std::size_t agent, Rng& rng);

  // Raises every agent's fatigue and baseline by delta. Meant for use on a
  // freshly restored world before its first tick; consumes no randomness.
  void treat_fatigue(double delta);

  // The focal agent's setup fatigue and accident count so far.
  std::pair<double, std::uint32_t> focal_outcome() const;

  const FactoryConfig& config() const { return cfg_; }
  double weather() const { return weather_; }
  std::span<const double> danger() const { return danger_; }
  std::span<const WorkerAgent> agents() const { return agents_; }
  std::span<WorkerAgent> agents() { return agents_; }

 private:
  FactoryWorld() = default;

  FactoryConfig cfg_;
  double weather_ = 0.0;
  std::vector<double> danger_;  // grid_w * grid_h values in [0, 1]
  std::vector<WorkerAgent> agents_;
};

}  // namespace mksim
