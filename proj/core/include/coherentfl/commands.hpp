#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "coherentfl/experiment.hpp"

namespace coherentfl::commands {

// Flag-level inputs shared by every subcommand. Optional fields override the
// corresponding config-file entries only when the flag was given.
struct CliOptions {
  std::string config_path;  // empty = built-in defaults
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<std::string> fill;
  std::optional<double> lambda;  // pilot duty cycle; resolves the refresh period
  std::optional<double> snr_db;
  std::optional<std::int64_t> rounds;
  bool mutate_shrinkage = false;  // negative control for the estimator checks
};

// Strict config load: unknown keys, wrong types, and inconsistent values are
// ConfigErrors. When resolved_json is non-null it receives the canonical
// serialization of the fully resolved run configuration.
experiment::ExperimentConfig load_config(const CliOptions& options,
                                         std::string* resolved_json = nullptr);

// "# coherentfl <version> config=<hash>" where the hash is FNV-1a 64 over the
// resolved configuration text. Every output file starts with this line.
std::string output_header(const std::string& resolved_config_json);

// Exit codes: 0 success, 1 failed checks or runtime failure, 2 config error.
int cmd_phy_validate(const CliOptions& options);
int cmd_power_sweep(const CliOptions& options);
int cmd_train(const CliOptions& options);
int cmd_compare_schemes(const CliOptions& options);

}  // namespace coherentfl::commands
