#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwphase {

/// Exit codes returned by run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // pipeline error or failed verification
inline constexpr int kExitUsage = 2;    // malformed configuration or I/O failure

/// Runs one subcommand; args exclude the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwphase
