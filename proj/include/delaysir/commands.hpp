// Batch front end behind the CLI subcommands.
#pragma once

#include <filesystem>
#include <iosfwd>

#include "delaysir/config.hpp"

namespace delaysir {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,          // all runs completed, no property violations
  kExitConfig = 1,      // configuration or I/O error
  kExitViolations = 2,  // completed, but some run violated D1-D4
};

/// One trajectory per (case, scheme): snapshot CSVs and PGMs for S, I, R, a per-step property
/// log and a manifest.json in `out`.
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// bounds.csv with one row per (case, scheme).
int cmd_bounds(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

/// sharpness.csv (one row per (case, scheme)) plus the per-mesh scan in sharpness_scan.csv.
int cmd_sharpness(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace delaysir
