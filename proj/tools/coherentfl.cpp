// Command-line front end: phy-validate, power-sweep, train, compare-schemes.
// Exit codes: 0 success, 1 failed checks or runtime failure, 2 config error.

#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "coherentfl/commands.hpp"
#include "coherentfl/errors.hpp"
#include "coherentfl/version.hpp"

namespace cmd = coherentfl::commands;

namespace {

void add_common_flags(CLI::App* sub, cmd::CliOptions& options) {
  sub->add_option("--config", options.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", options.out_dir, "output directory (default: .)");
  sub->add_option("--seed", options.seed, "override the config seed");
}

void add_run_flags(CLI::App* sub, cmd::CliOptions& options) {
  sub->add_option("--scheme", options.scheme,
                  "downlink scheme: conventional, product, or additive");
  sub->add_option("--fill", options.fill, "missing-entry fill: zf or plmf");
  sub->add_option("--lambda", options.lambda,
                  "pilot duty cycle in [0,1); sets the dynamic refresh period");
  sub->add_option("--rounds", options.rounds, "communication rounds");
  sub->add_option("--snr-db", options.snr_db, "transmit SNR in dB over unit noise");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherentfl: federated learning over coherence-limited MISO downlinks"};
  app.set_version_flag("--version",
                       std::string("coherentfl ") + coherentfl::kVersion);
  app.require_subcommand(1);

  cmd::CliOptions options;
  std::function<int(const cmd::CliOptions&)> action;

  auto* phy = app.add_subcommand("phy-validate",
                                 "self-check the physical-layer math against "
                                 "Monte Carlo and grid-search references");
  add_common_flags(phy, options);
  phy->add_flag("--mutate-shrinkage", options.mutate_shrinkage,
                "negative control: perturb the estimator so checks must fail")
      ->group("");
  phy->callback([&] { action = cmd::cmd_phy_validate; });

  auto* sweep = app.add_subcommand(
      "power-sweep", "tabulate optimal power splits and achievable rates over "
                     "an (antennas, coherence, budget) grid");
  add_common_flags(sweep, options);
  sweep->callback([&] { action = cmd::cmd_power_sweep; });

  auto* train = app.add_subcommand(
      "train", "run one federated training experiment and write its trace "
               "plus a convergence-bound report");
  add_common_flags(train, options);
  add_run_flags(train, options);
  train->callback([&] { action = cmd::cmd_train; });

  auto* compare = app.add_subcommand(
      "compare-schemes", "run all downlink schemes on identical seeds and "
                         "write accuracy versus communication cost");
  add_common_flags(compare, options);
  add_run_flags(compare, options);
  compare->callback([&] { action = cmd::cmd_compare_schemes; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action(options);
  } catch (const coherentfl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
