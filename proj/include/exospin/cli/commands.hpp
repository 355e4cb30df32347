#pragma once

// Subcommands. Each writes its files under cfg.out_dir and returns the
// process exit code: 0 ok, 3 Monte Carlo non-convergence (files still
// written). Config and validation problems throw ConfigError (exit 2).

#include <optional>
#include <ostream>
#include <string>

#include "exospin/cli/config.hpp"

namespace exospin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;

struct CommandOptions {
  bool force = false;
  std::optional<std::string> sweep_param;  // optimize: one panel instead of all four
  std::optional<int> sweep_points;         // optimize: log-spaced points over the default span
  std::ostream* log = nullptr;             // progress/summary lines
};

int cmd_field(const RunConfig& cfg, const CommandOptions& opt);
int cmd_optimize(const RunConfig& cfg, const CommandOptions& opt);
int cmd_exclusion(const RunConfig& cfg, const CommandOptions& opt);
int cmd_systematics(const RunConfig& cfg, const CommandOptions& opt);
int cmd_responsivity(const RunConfig& cfg, const CommandOptions& opt);
int cmd_strayfield(const RunConfig& cfg, const CommandOptions& opt);

/// "%.8e", i.e. nine significant digits.
std::string csv_number(double x);

}  // namespace exospin::cli
