#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qct/config.hpp"

namespace qct::cli {

// Outcome of one scenario run: exit 0 iff every reported check passed,
// 1 on check failures, errors propagate as exceptions (nothing written).
struct ScenarioResult {
  int exit_code = 0;
  std::string report;
  std::vector<std::string> files_written;  // absolute or out_dir-relative paths
};

// Subcommands: alpha, wkb, flow, instanton, compare, manifold, morse, sweep.
// The config must contain a [<command>] section; unknown keys anywhere are
// rejected after the run. seed overrides field.seed for randomized fields.
ScenarioResult run_scenario(const std::string& command, Config cfg,
                            const std::string& out_dir,
                            std::optional<unsigned long long> seed = {});

}  // namespace qct::cli
