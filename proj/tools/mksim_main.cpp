#include "mksim/cli.hpp"

int main(int argc, char** argv) { return mksim::run_cli(argc, argv); }
