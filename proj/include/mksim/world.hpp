#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "mksim/bytes.hpp"
#include "mksim/config.hpp"
#include "mksim/rng.hpp"

namespace mksim {

// Model-specific world state and behaviour, driven by the engine's loop.
// Implementations must be fully value-serializable: save() followed by the
// registered loader reconstructs an equivalent world bit for bit.
class World {
 public:
  virtual ~World() = default;

  virtual std::string_view model_id() const = 0;
  virtual std::size_t agent_count() const = 0;

  // One activation of one agent. All randomness comes from the supplied
  // generator; the activation order is the engine's responsibility.
  virtual void agent_act(std::size_t agent, Rng& rng) = 0;

  virtual void save(ByteWriter& out) const = 0;
  virtual std::unique_ptr<World> clone() const = 0;
};

// Maps model ids to their setup and snapshot-load entry points.
class ModelRegistry {
 public:
  using SetupFn = std::function<std::unique_ptr<World>(const KeyValueConfig&, Rng&)>;
  using LoadFn = std::function<std::unique_ptr<World>(ByteReader&)>;

  void register_model(std::string id, SetupFn setup, LoadFn load);
  bool contains(std::string_view id) const;

  std::unique_ptr<World> setup(std::string_view id, const KeyValueConfig& config,
                               Rng& rng) const;
  std::unique_ptr<World> load(std::string_view id, ByteReader& in) const;

 private:
  struct Entry {
    SetupFn setup;
    LoadFn load;
  };
  const Entry& find(std::string_view id) const;
  std::map<std::string, Entry, std::less<>> models_;
};

}  // namespace mksim
