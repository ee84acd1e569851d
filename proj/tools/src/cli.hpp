#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hmlkit::cli {

// Process exit codes.
inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

/// Runs one command line (without the program name). Results go to out;
/// diagnostics go to err in text mode and to out as a JSON error object in
/// --json mode. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hmlkit::cli
