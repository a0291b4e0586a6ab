#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mksim/rng.hpp"
#include "mksim/world.hpp"

namespace mksim {

// A complete, checksummed capture of simulation state.
//
// Byte layout (everything little-endian):
//   magic "MKSN" | format_version u32 | model_id (u32 len + bytes)
//   | payload_len u32 | payload | checksum u64
// where payload = tick u64 | rng state block | world_len u32 | world bytes,
// and checksum is FNV-1a64 over every byte that precedes it.
struct Snapshot {
  static constexpr std::array<unsigned char, 4> kMagic{'M', 'K', 'S', 'N'};
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint32_t format_version = kFormatVersion;
  std::string model_id;
  std::vector<unsigned char> payload;
  std::uint64_t checksum = 0;

  std::vector<unsigned char> to_bytes() const;
  static Snapshot from_bytes(std::span<const unsigned char> bytes);

  void write_file(const std::filesystem::path& path) const;
  static Snapshot read_file(const std::filesystem::path& path);

  bool operator==(const Snapshot&) const = default;
};

// One running simulation: a tick counter, the generator that owns all of the
// run's randomness, and the model world. Each step reshuffles the agent
// activation order so no agent systematically acts first, and every agent
// acts exactly once per tick.
class Simulation {
 public:
  static Simulation setup(const ModelRegistry& registry, std::string_view model_id,
                          const KeyValueConfig& config, Seed seed);

  void step();

  // Steps until the given tick; target must not lie in the past.
  void run_until(std::uint64_t target_tick);

  Snapshot make_snapshot() const;
  static Simulation restore(const ModelRegistry& registry, const Snapshot& snapshot);

  // Deep copy: two futures that share every bit of present state but are
  // completely independent afterwards.
  Simulation fork() const;

  std::uint64_t tick() const { return tick_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }
  World& world() { return *world_; }
  const World& world() const { return *world_; }

 private:
  Simulation(std::uint64_t tick, Rng rng, std::unique_ptr<World> world);

  std::uint64_t tick_;
  Rng rng_;
  std::unique_ptr<World> world_;
  std::vector<std::size_t> order_;  // scratch; rebuilt from scratch each step
};

}  // namespace mksim
