#pragma once

namespace ebmc {

// Entry point behind the command-line tool; exposed as a function so tests
// can drive the exact code path the binary runs.
//   run <config> --out <dir> [--parallelism N] [--seed S]
//   sweep <config> --out <dir> [--parallelism N]
//   oracle gridworld <config>
int run_cli(int argc, const char* const* argv);

}  // namespace ebmc
