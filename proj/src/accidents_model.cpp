#include "mksim/accidents_model.hpp"

#include <algorithm>
#include <cmath>

#include "mksim/errors.hpp"

namespace mksim {

FactoryConfig FactoryConfig::from_key_values(const KeyValueConfig& kv) {
  FactoryConfig c;
  c.n_agents = kv.get_u32_or("agents", c.n_agents);
  c.grid_w = kv.get_u32_or("grid_w", c.grid_w);
  c.grid_h = kv.get_u32_or("grid_h", c.grid_h);
  c.run_length = kv.get_u64_or("run_length", c.run_length);
  c.focal_agent = kv.get_u32_or("focal_agent", c.focal_agent);
  c.treatment_delta = kv.get_double_or("treatment_delta", c.treatment_delta);
  c.validate();
  return c;
}

void FactoryConfig::validate() const {
  if (n_agents == 0) throw ConfigError("factory config: agents must be positive");
  if (grid_w < 2 || grid_h < 2)
    throw ConfigError("factory config: grid dimensions must be at least 2");
  if (focal_agent >= n_agents)
    throw ConfigError("factory config: focal_agent out of range");
  if (!(treatment_delta >= 0.0) || !std::isfinite(treatment_delta))
    throw ConfigError("factory config: treatment_delta must be finite and non-negative");
}

FactoryWorld::FactoryWorld(const FactoryConfig& config, Rng& rng) : cfg_(config) {
  cfg_.validate();
  weather_ = rng.next_uniform();
  danger_.resize(static_cast<std::size_t>(cfg_.grid_w) * cfg_.grid_h);
  for (auto& d : danger_) d = rng.next_uniform();

  agents_.resize(cfg_.n_agents);
  for (auto& a : agents_) {
    a.age = 18 + static_cast<std::uint32_t>(rng.next_int_below(48));
    const double age_norm = (a.age - 18) / 47.0;
    const double clothing_noise = rng.next_uniform() * 0.5 - 0.25;
    a.clothing = 1.0 + 2.0 * age_norm + 3.0 * weather_ + clothing_noise;
    const double fatigue_noise = rng.next_uniform() * 2.0;
    a.fatigue = a.baseline_fatigue = 2.0 + 6.0 * age_norm + fatigue_noise;
    a.accidents = 0;
    a.cell = static_cast<std::uint32_t>(rng.next_int_below(danger_.size()));
  }
}

double accident_chance(double fatigue, double danger, double weather) {
  const double threshold_part = fatigue > 10.0 * danger ? fatigue / 10.0 : 0.0;
  return std::min(1.0, 0.5 * threshold_part + 0.2 * weather);
}

double FactoryWorld::accident_probability(std::size_t agent) const {
  const WorkerAgent& a = agents_[agent];
  return accident_chance(a.fatigue, danger_[a.cell], weather_);
}

void FactoryWorld::worker_tick(std::size_t agent, Rng& rng) {
  WorkerAgent& a = agents_[agent];

  static constexpr long kDx[4] = {1, -1, 0, 0};
  static constexpr long kDy[4] = {0, 0, 1, -1};
  const long w = static_cast<long>(cfg_.grid_w);
  const long h = static_cast<long>(cfg_.grid_h);
  const std::size_t dir = static_cast<std::size_t>(rng.next_int_below(4));
  const long x = (static_cast<long>(a.cell) % w + kDx[dir] + w) % w;
  const long y = (static_cast<long>(a.cell) / w + kDy[dir] + h) % h;
  a.cell = static_cast<std::uint32_t>(y * w + x);

  // The accident draw happens every tick, so treated and untreated runs
  // consume the stream in lockstep.
  const double p = accident_probability(agent);
  if (rng.next_uniform() < p) {
    a.accidents += 1;
    a.fatigue = a.baseline_fatigue;
  } else {
    a.fatigue += 0.05;
  }
}

void FactoryWorld::agent_act(std::size_t agent, Rng& rng) { worker_tick(agent, rng); }

void FactoryWorld::treat_fatigue(double delta) {
  for (auto& a : agents_) {
    a.fatigue += delta;
    a.baseline_fatigue += delta;
  }
}

std::pair<double, std::uint32_t> FactoryWorld::focal_outcome() const {
  const WorkerAgent& a = agents_[cfg_.focal_agent];
  // Baseline never changes within a run, so it equals the setup fatigue
  // (plus the treatment, when one was applied).
  return {a.baseline_fatigue, a.accidents};
}

void FactoryWorld::save(ByteWriter& out) const {
  out.str(kModelId);
  out.u32(cfg_.n_agents);
  out.u32(cfg_.grid_w);
  out.u32(cfg_.grid_h);
  out.u64(cfg_.run_length);
  out.u32(cfg_.focal_agent);
  out.f64(cfg_.treatment_delta);
  out.f64(weather_);
  for (const double d : danger_) out.f64(d);
  for (const auto& a : agents_) {
    out.u32(a.age);
    out.f64(a.clothing);
    out.f64(a.fatigue);
    out.f64(a.baseline_fatigue);
    out.u32(a.accidents);
    out.u32(a.cell);
  }
}

std::unique_ptr<FactoryWorld> FactoryWorld::load(ByteReader& in) {
  if (in.str() != kModelId)
    throw SnapshotError("world payload does not belong to the accidents model");
  auto world = std::unique_ptr<FactoryWorld>(new FactoryWorld());
  FactoryConfig& c = world->cfg_;
  c.n_agents = in.u32();
  c.grid_w = in.u32();
  c.grid_h = in.u32();
  c.run_length = in.u64();
  c.focal_agent = in.u32();
  c.treatment_delta = in.f64();
  c.validate();
  world->weather_ = in.f64();
  world->danger_.resize(static_cast<std::size_t>(c.grid_w) * c.grid_h);
  for (auto& d : world->danger_) d = in.f64();
  world->agents_.resize(c.n_agents);
  for (auto& a : world->agents_) {
    a.age = in.u32();
    a.clothing = in.f64();
    a.fatigue = in.f64();
    a.baseline_fatigue = in.f64();
    a.accidents = in.u32();
    a.cell = in.u32();
  }
  return world;
}

std::unique_ptr<World> FactoryWorld::clone() const {
  return std::unique_ptr<World>(new FactoryWorld(*this));
}

}  // namespace mksim
