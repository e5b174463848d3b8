// SPDX-License-Identifier: Apache-2.0
//
// phyauth: physical-layer assisted authentication for vehicular networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command line driver for the simulation scenarios.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phyauth/errors.hpp"
#include "phyauth/harness.hpp"

namespace {

using phyauth::harness::ExperimentConfig;
using phyauth::harness::Scenario;

enum ExitCode : int { kOk = 0, kConfig = 1, kNumerical = 2, kSelfCheck = 3 };

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> workers;
  std::string alpha;
  std::string snr_db;
  std::string k;
  std::string n;
  bool self_check = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value config file");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--seed", f.seed, "64-bit seed");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials per point");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--alpha", f.alpha, "comma separated Wald thresholds");
  cmd->add_option("--snr-db", f.snr_db, "comma separated SNR values in dB");
  cmd->add_option("--k", f.k, "comma separated Ricean factors");
  cmd->add_option("--n", f.n, "comma separated array sizes");
  cmd->add_flag("--self-check", f.self_check,
                "exit with status 3 if any point fails its consistency check");
}

ExperimentConfig build_config(Scenario scenario, const Flags& f) {
  ExperimentConfig cfg = ExperimentConfig::defaults_for(scenario);
  if (!f.config.empty()) {
    phyauth::harness::apply_config_file(cfg, f.config);
    cfg.scenario = scenario;
  }
  using phyauth::harness::apply_setting;
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.workers) cfg.workers = *f.workers;
  if (!f.alpha.empty()) apply_setting(cfg, "alpha", f.alpha);
  if (!f.snr_db.empty()) apply_setting(cfg, "snr_db", f.snr_db);
  if (!f.k.empty()) apply_setting(cfg, "k", f.k);
  if (!f.n.empty()) apply_setting(cfg, "n", f.n);
  if (f.self_check) cfg.self_check = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phyauth: AoA-assisted authentication and key agreement simulations"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"pd", "detection probability sweep (honest vehicle)"},
      {"pf-far", "false alarm sweep, distant attacker"},
      {"pf-near", "false alarm sweep, nearby attacker"},
      {"crb", "estimator variance against the Cramer-Rao bound"},
      {"ska-demo", "step-by-step key agreement traces"},
      {"mitm-map", "man-in-the-middle success map"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig cfg = build_config(phyauth::harness::parse_scenario(name), flags);
    const phyauth::harness::RunOutput result = phyauth::harness::run(cfg);
    if (flags.out.empty()) {
      std::cout << result.text;
    } else {
      std::ofstream out(flags.out, std::ios::binary);
      out << result.text;
      if (!out) {
        std::cerr << "error: cannot write " << flags.out << '\n';
        return kConfig;
      }
    }
    if (result.flagged > 0) {
      std::cerr << "warning: " << result.flagged << " point(s) failed their consistency check\n";
      if (cfg.self_check) return kSelfCheck;
    }
    return kOk;
  } catch (const phyauth::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
