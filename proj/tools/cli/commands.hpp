#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/params.hpp"
#include "cli/table.hpp"

namespace mcdelay::cli {

/// Runs the pipeline of `spec` and returns its table. Non-fatal conditions
/// (unstable configurations, evaluator fallbacks) are appended to `notes`.
Table execute(const RunSpec& spec, std::vector<std::string>* notes = nullptr);

/// execute() + render + write to spec.out (or `stdout_stream`). Errors are
/// reported on `diag` as one JSON object per line; returns the exit status.
int run(const RunSpec& spec, std::ostream& stdout_stream, std::ostream& diag);

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

}  // namespace mcdelay::cli
