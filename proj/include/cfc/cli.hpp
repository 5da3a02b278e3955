#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfc {

// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,   // a coloring was found not conflict-free
  kExitInputError = 2,  // malformed input or invalid parameters
  kExitInvariant = 3,   // an internal invariant broke
};

// Entry point behind the `cfcolor` binary. `args` excludes the program name.
// Subcommands: run, gen, bench, verify, adversary, kinetic. The environment
// variable CFCOLOR_SEED overrides --seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfc
