#pragma once

namespace rbopt {

/// Command-line entry point. Commands: solve, experiment, benchmark-solution,
/// list-problems. Returns 0 on normal termination, 1 on configuration
/// errors, 2 on surrogate/subproblem failure.
int run_cli(int argc, const char* const* argv);

}  // namespace rbopt
