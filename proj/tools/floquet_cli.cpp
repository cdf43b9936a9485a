// Copyright 2026 The Floquet Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: floquet <command> [flags].

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floquet/ensemble.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> epsilon;
  std::vector<double> epsilon_grid;
  std::string interaction;
  std::optional<int> half_periods;
  std::optional<int> realizations;
  std::optional<std::uint64_t> shots;
  std::string mode;
  std::vector<std::string> inputs;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "INI config file");
  cmd->add_option("--out", f.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--workers", f.workers, "Worker threads (overrides FLOQUET_WORKERS)")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", f.epsilon, "Rotation error");
  cmd->add_option("--interaction", f.interaction, "xx, ising or off")
      ->check(CLI::IsMember({"xx", "ising", "off"}, CLI::ignore_case));
  cmd->add_option("--half-periods", f.half_periods, "Number of half periods");
  cmd->add_option("--realizations", f.realizations, "Disorder realizations");
  cmd->add_option("--shots", f.shots, "Shots per measurement");
}

floquet::RunConfig resolve(const Flags& f) {
  floquet::RunConfig c =
      f.config_path.empty() ? floquet::RunConfig::defaults(10) : floquet::load_run_config(f.config_path);
  if (f.seed) c.master_seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.epsilon) {
    c.physics.epsilon = *f.epsilon;
    c.epsilon_grid = {*f.epsilon};
  }
  if (!f.epsilon_grid.empty()) c.epsilon_grid = f.epsilon_grid;
  if (!f.interaction.empty()) c.physics.interaction_kind = floquet::parse_interaction_kind(f.interaction);
  if (f.half_periods) c.half_periods = *f.half_periods;
  if (f.realizations) c.realizations = *f.realizations;
  if (f.shots) c.shots = *f.shots;
  if (!f.mode.empty()) c.mode = floquet::parse_evolve_mode(f.mode);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet spin-chain simulator"};
  app.require_subcommand(1);
  Flags flags;

  auto* evolve = app.add_subcommand("evolve", "Time series for one epsilon and one disorder draw");
  add_common(evolve, flags);
  evolve->add_option("--mode", flags.mode, "pure, open or shots")
      ->check(CLI::IsMember({"pure", "open", "shots"}, CLI::ignore_case));
  auto* sweep = app.add_subcommand("sweep", "Disorder-averaged M over an epsilon grid");
  add_common(sweep, flags);
  sweep->add_option("--epsilon-grid", flags.epsilon_grid, "Comma-separated epsilon values")->delimiter(',');
  auto* longtime = app.add_subcommand("longtime", "XX vs Ising lifetimes from cached period unitaries");
  add_common(longtime, flags);
  auto* spectrum = app.add_subcommand("spectrum", "Magnitude spectrum of M");
  add_common(spectrum, flags);
  spectrum->add_option("--input", flags.inputs, "Series CSV files to average instead of simulating");
  auto* lindblad = app.add_subcommand("lindblad", "Open-system time series");
  add_common(lindblad, flags);
  auto* leakage = app.add_subcommand("leakage", "Three-level chain with |2> population");
  add_common(leakage, flags);
  auto* correct = app.add_subcommand("correct", "Shot sampling with readout correction");
  add_common(correct, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const floquet::RunConfig config = resolve(flags);
    floquet::CommandResult result;
    if (*evolve) {
      result = floquet::cmd_evolve(config, flags.out_dir);
    } else if (*sweep) {
      result = floquet::cmd_sweep(config, flags.out_dir);
    } else if (*longtime) {
      result = floquet::cmd_longtime(config, flags.out_dir);
    } else if (*spectrum) {
      result = floquet::cmd_spectrum(config, flags.out_dir, flags.inputs);
    } else if (*lindblad) {
      result = floquet::cmd_lindblad(config, flags.out_dir);
    } else if (*leakage) {
      result = floquet::cmd_leakage(config, flags.out_dir);
    } else {
      result = floquet::cmd_correct(config, flags.out_dir);
    }
    std::cout << "manifest_hash " << result.manifest.manifest_hash << "\n";
    for (const auto& path : result.manifest.outputs) std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const floquet::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const floquet::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return 1;
  }
}
