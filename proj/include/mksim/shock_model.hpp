#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mksim/config.hpp"
#include "mksim/world.hpp"

namespace mksim {

inline constexpr int kResponseCount = 5;

// Parameters of the attitude-diffusion market-shock model.
// Config keys: agents, p_local, shock_tick, shock_size, n_shocked,
// final_tick, shock_enabled.
struct ShockConfig {
  std::uint32_t n_agents = 225;  // one agent per cell of a square toroidal grid
  double p_local = 0.95;         // chance a meeting partner is a direct neighbour
  std::uint64_t shock_tick = 50;
  std::uint32_t shock_size = 10;  // intensity units added to the target response
  std::uint32_t n_shocked = 50;   // distinct agents hit by the shock
  std::uint64_t final_tick = 100;
  bool shock_enabled = true;

  // The shocked response is the last (most negative) one, 1-based.
  static constexpr int kTargetResponse = kResponseCount;

  static ShockConfig from_key_values(const KeyValueConfig& kv);
  void validate() const;

  bool operator==(const ShockConfig&) const = default;
};

// One buyer: an intensity per ordinal response. Intensities only ever grow
// (diffusion and shocks both add). Grid position is fixed and derived from
// the agent index.
struct AttitudeAgent {
  std::array<std::uint32_t, kResponseCount> intensities{};

  bool operator==(const AttitudeAgent&) const = default;
};

// Agents mix pairwise each tick: the initiator meets either a direct
// neighbour (Moore 8-neighbourhood on the torus) or any other agent, and the
// pair's strongest-held responses rub off on each other by one unit in each
// direction.
class ShockWorld final : public World {
 public:
  static constexpr std::string_view kModelId = "shock";

  ShockWorld(const ShockConfig& config, Rng& rng);

  std::string_view model_id() const override { return kModelId; }
  std::size_t agent_count() const override { return agents_.size(); }
  void agent_act(std::size_t agent, Rng& rng) override;
  void save(ByteWriter& out) const override;
  std::unique_ptr<World> clone() const override;

  static std::unique_ptr<ShockWorld> load(ByteReader& in);

  // Index (1-based) of the agent's strongest response; ties break toward the
  // lowest index.
  int high_response(std::size_t agent) const;

  // Chooses a meeting partner for the initiator. Never the initiator itself.
  std::size_t meet(std::size_t initiator, Rng& rng) const;

  // Two-way diffusion within one meeting: b gains one unit in a's strongest
  // response first, then a gains one unit in b's strongest response as it
  // stands after that increment.
  void diffuse(std::size_t a, std::size_t b);

  // Adds shock_size to the target response of n_shocked distinct agents
  // chosen uniformly. A disabled or zero-sized shock leaves both the world
  // and the generator untouched, so a restored twin run stays identical.
  void apply_shock(Rng& rng);

  // Number of agents whose strongest response is the shocked one.
  std::size_t count_negative() const;

  std::uint64_t total_intensity() const;

  const ShockConfig& config() const { return cfg_; }
  std::span<const AttitudeAgent> agents() const { return agents_; }
  std::span<AttitudeAgent> agents() { return agents_; }
  std::uint32_t grid_width() const { return grid_w_; }
  std::array<std::size_t, 8> moore_neighbors(std::size_t agent) const;

 private:
  ShockWorld() = default;

  ShockConfig cfg_;
  std::uint32_t grid_w_ = 0;
  std::vector<AttitudeAgent> agents_;
};

}  // namespace mksim
