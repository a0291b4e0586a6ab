#include "mksim/shock_model.hpp"

#include <cmath>

#include "mksim/errors.hpp"

namespace mksim {

namespace {

// Largest integer r with r*r <= n.
std::uint32_t isqrt(std::uint32_t n) {
  const auto wide = static_cast<std::uint64_t>(n);
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > wide) --r;
  while ((r + 1) * (r + 1) <= wide) ++r;
  return static_cast<std::uint32_t>(r);
}

}  // namespace

ShockConfig ShockConfig::from_key_values(const KeyValueConfig& kv) {
  ShockConfig c;
  c.n_agents = kv.get_u32_or("agents", c.n_agents);
  c.p_local = kv.get_double_or("p_local", c.p_local);
  c.shock_tick = kv.get_u64_or("shock_tick", c.shock_tick);
  c.shock_size = kv.get_u32_or("shock_size", c.shock_size);
  c.n_shocked = kv.get_u32_or("n_shocked", c.n_shocked);
  c.final_tick = kv.get_u64_or("final_tick", c.final_tick);
  c.shock_enabled = kv.get_bool_or("shock_enabled", c.shock_enabled);
  c.validate();
  return c;
}

void ShockConfig::validate() const {
  const std::uint32_t side = isqrt(n_agents);
  if (n_agents < 4 || side * side != n_agents)
    throw ConfigError("shock config: agents must be a perfect square of at least 4");
  if (!(p_local >= 0.0 && p_local <= 1.0))
    throw ConfigError("shock config: p_local must lie in [0, 1]");
  if (n_shocked > n_agents)
    throw ConfigError("shock config: n_shocked exceeds agents");
  if (shock_tick > final_tick)
    throw ConfigError("shock config: shock_tick exceeds final_tick");
}

ShockWorld::ShockWorld(const ShockConfig& config, Rng& rng) : cfg_(config) {
  cfg_.validate();
  grid_w_ = isqrt(cfg_.n_agents);
  agents_.resize(cfg_.n_agents);
  // Initial intensities: independent uniform integers on [0, 100], drawn
  // agent by agent, response by response.
  for (auto& agent : agents_)
    for (auto& intensity : agent.intensities)
      intensity = static_cast<std::uint32_t>(rng.next_int_below(101));
}

int ShockWorld::high_response(std::size_t agent) const {
  const auto& v = agents_[agent].intensities;
  int best = 0;
  for (int r = 1; r < kResponseCount; ++r)
    if (v[r] > v[best]) best = r;
  return best + 1;
}

std::array<std::size_t, 8> ShockWorld::moore_neighbors(std::size_t agent) const {
  static constexpr long kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static constexpr long kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  const long w = static_cast<long>(grid_w_);
  const long x = static_cast<long>(agent) % w;
  const long y = static_cast<long>(agent) / w;
  std::array<std::size_t, 8> out{};
  for (std::size_t k = 0; k < 8; ++k) {
    const long nx = (x + kDx[k] + w) % w;
    const long ny = (y + kDy[k] + w) % w;
    out[k] = static_cast<std::size_t>(ny * w + nx);
  }
  return out;
}

std::size_t ShockWorld::meet(std::size_t initiator, Rng& rng) const {
  if (rng.next_uniform() < cfg_.p_local) {
    const auto neighbors = moore_neighbors(initiator);
    return neighbors[static_cast<std::size_t>(rng.next_int_below(8))];
  }
  // Uniform over every other agent; skip over the initiator's own slot.
  const std::size_t pick =
      static_cast<std::size_t>(rng.next_int_below(agents_.size() - 1));
  return pick >= initiator ? pick + 1 : pick;
}

void ShockWorld::diffuse(std::size_t a, std::size_t b) {
  agents_[b].intensities[static_cast<std::size_t>(high_response(a) - 1)] += 1;
  agents_[a].intensities[static_cast<std::size_t>(high_response(b) - 1)] += 1;
}

void ShockWorld::agent_act(std::size_t agent, Rng& rng) {
  const std::size_t partner = meet(agent, rng);
  diffuse(agent, partner);
}

void ShockWorld::apply_shock(Rng& rng) {
  if (!cfg_.shock_enabled || cfg_.n_shocked == 0 || cfg_.shock_size == 0) return;
  const auto chosen = sample_distinct(rng, agents_.size(), cfg_.n_shocked);
  for (const std::size_t agent : chosen)
    agents_[agent].intensities[ShockConfig::kTargetResponse - 1] += cfg_.shock_size;
}

std::size_t ShockWorld::count_negative() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (high_response(i) == ShockConfig::kTargetResponse) ++count;
  return count;
}

std::uint64_t ShockWorld::total_intensity() const {
  std::uint64_t total = 0;
  for (const auto& agent : agents_)
    for (const std::uint32_t v : agent.intensities) total += v;
  return total;
}

void ShockWorld::save(ByteWriter& out) const {
  out.str(kModelId);
  out.u32(cfg_.n_agents);
  out.f64(cfg_.p_local);
  out.u64(cfg_.shock_tick);
  out.u32(cfg_.shock_size);
  out.u32(cfg_.n_shocked);
  out.u64(cfg_.final_tick);
  out.u8(cfg_.shock_enabled ? 1 : 0);
  for (const auto& agent : agents_)
    for (const std::uint32_t v : agent.intensities) out.u32(v);
}

std::unique_ptr<ShockWorld> ShockWorld::load(ByteReader& in) {
  if (in.str() != kModelId)
    throw SnapshotError("world payload does not belong to the shock model");
  auto world = std::unique_ptr<ShockWorld>(new ShockWorld());
  ShockConfig& c = world->cfg_;
  c.n_agents = in.u32();
  c.p_local = in.f64();
  c.shock_tick = in.u64();
  c.shock_size = in.u32();
  c.n_shocked = in.u32();
  c.final_tick = in.u64();
  c.shock_enabled = in.u8() != 0;
  c.validate();
  world->grid_w_ = isqrt(c.n_agents);
  world->agents_.resize(c.n_agents);
  for (auto& agent : world->agents_)
    for (auto& v : agent.intensities) v = in.u32();
  return world;
}

std::unique_ptr<World> ShockWorld::clone() const {
  return std::unique_ptr<World>(new ShockWorld(*this));
}

}  // namespace mksim
