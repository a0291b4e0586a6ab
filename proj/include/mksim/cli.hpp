#pragma once

namespace mksim {

// Full command-line entry point; returns the process exit code.
// Subcommands: shock-paired, shock-unpaired, accidents-paired,
// accidents-observational, replicate-all, sweep.
int run_cli(int argc, const char* const* argv);

}  // namespace mksim
