#pragma once

#include <iosfwd>

namespace microstat::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitData = 3,
    kExitNumeric = 4,
};

/// Parses argv and runs one subcommand. Help and usage go to out, diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace microstat::cli
