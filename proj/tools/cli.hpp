#pragma once

#include <ostream>

namespace unibound::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int { kOk = 0, kRuntimeError = 1, kViolation = 2 };

/// Entry point of the `unibound` tool. Diagnostics go to `err`; data goes to files.
int run(int argc, const char* const* argv, std::ostream& err);

}  // namespace unibound::cli
