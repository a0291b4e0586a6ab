#pragma once

#include "mksim/world.hpp"

namespace mksim {

// Registers the shock and accidents models under their canonical ids.
void register_builtin_models(ModelRegistry& registry);

// Registry with both built-in models, shared by the harness and the CLI.
const ModelRegistry& builtin_registry();

}  // namespace mksim
