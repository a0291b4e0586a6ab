#include "mksim/models.hpp"

#include "mksim/accidents_model.hpp"
#include "mksim/shock_model.hpp"

namespace mksim {

void register_builtin_models(ModelRegistry& registry) {
  registry.register_model(
      std::string(ShockWorld::kModelId),
      [](const KeyValueConfig& kv, Rng& rng) -> std::unique_ptr<World> {
        return std::make_unique<ShockWorld>(ShockConfig::from_key_values(kv), rng);
      },
      [](ByteReader& in) -> std::unique_ptr<World> { return ShockWorld::load(in); });

  registry.register_model(
      std::string(FactoryWorld::kModelId),
      [](const KeyValueConfig& kv, Rng& rng) -> std::unique_ptr<World> {
        return std::make_unique<FactoryWorld>(FactoryConfig::from_key_values(kv), rng);
      },
      [](ByteReader& in) -> std::unique_ptr<World> { return FactoryWorld::load(in); });
}

const ModelRegistry& builtin_registry() {
  static const ModelRegistry registry = [] {
    ModelRegistry r;
    register_builtin_models(r);
    return r;
  }();
  return registry;
}

}  // namespace mksim
