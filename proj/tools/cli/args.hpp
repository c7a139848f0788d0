#pragma once

#include <optional>
#include <string>

#include "cli/params.hpp"

namespace mcdelay::cli {

/// Outcome of command-line parsing: either a RunSpec or an exit code after
/// help/usage output has been written.
struct ParsedArgs {
  std::optional<RunSpec> spec;
  int exit_code = 0;
  std::string message;
};

ParsedArgs parse_command_line(int argc, const char* const* argv);

}  // namespace mcdelay::cli
