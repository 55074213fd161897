#pragma once

#include "cli/config.hpp"

#include <ostream>

namespace vacrng::cli {

/// Exit codes.
inline constexpr int kExitOk          = 0;
inline constexpr int kExitConfig      = 2;
inline constexpr int kExitData        = 3;
inline constexpr int kExitEntropySafe = 4;

/// Each command writes its files under config.paths and a JSON summary (or one rate line) to `out`.
void cmd_simulate(const RunConfig& config, std::ostream& out);
void cmd_calibrate(const RunConfig& config, std::ostream& out);
void cmd_extract(const RunConfig& config, std::ostream& out);
/// Returns false when every section of the bundle failed.
bool cmd_report(const RunConfig& config, std::ostream& out);
void cmd_rate(const RunConfig& config, std::ostream& out);

/// Parses argv, resolves the configuration and dispatches. Never throws; returns an exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vacrng::cli
