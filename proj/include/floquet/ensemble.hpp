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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floquet/hamiltonians.hpp"
#include "floquet/measurement.hpp"
#include "floquet/observables.hpp"
#include "floquet/open_system.hpp"
#include "floquet/record.hpp"

namespace floquet {

enum class EvolveMode { kPure, kOpen, kShots };

std::string to_string(EvolveMode mode);
EvolveMode parse_evolve_mode(const std::string& text);

enum class NoiseSource { kDevice, kNone, kCustom };

/// Everything a command needs. Loaded from an INI file, then overridden by flags.
struct RunConfig {
  FloquetConfig physics = FloquetConfig::with_defaults(10);
  std::string initial_state;  // bitstring, empty means all zeros
  std::uint64_t master_seed = 2023;
  int realizations = 20;
  int half_periods = 100;
  int workers = 0;  // 0: FLOQUET_WORKERS or 1; never part of the hash
  EvolveMode mode = EvolveMode::kPure;
  std::uint64_t shots = 10000;
  std::vector<double> epsilon_grid{0.0, 0.04, 0.1, 0.16};

  NoiseSource noise_source = NoiseSource::kDevice;
  NoiseModel custom_noise;
  OpenRunOptions open;

  bool custom_calibration = false;
  ReadoutCalibration calibration;

  int longtime_periods = 200000;
  int longtime_realizations = 1;
  int longtime_points_per_decade = 20;
  LifetimeOptions lifetime;

  double peak_threshold = 0.25;
  double peak_f_low = 0.25;
  double peak_f_high = 0.5;

  int leakage_sites = 5;  // leading sites of the chain run as qutrits
  bool leakage_noise = false;
  ReadoutMapping leakage_mapping = ReadoutMapping::kDichotomic;

  /// Defaults for an L-site chain.
  static RunConfig defaults(int length);

  StateVector initial() const;
  NoiseModel noise() const;
  ReadoutCalibration readout() const;
  void validate() const;
};

/// Parses an INI file. Unknown sections or keys are errors. Throws ConfigError
/// naming the path when the file cannot be read.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<string>");

/// Canonical text of every input that affects outputs (the worker count is excluded).
std::string canonical_run_text(const std::string& command, const RunConfig& config);

struct RunManifest {
  std::string command;
  std::string manifest_hash;
  std::string config_text;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> realization_seeds;
  std::vector<std::string> outputs;
  std::string started_utc;
  double wall_seconds = 0.0;
  int workers = 1;

  std::string to_json() const;
};

/// Series CSV: "# manifest_hash=<hex>" line, then half_period_index, time_ns,
/// M_raw, M_staggered, chi_sg, z_1..z_L and any extra named columns.
struct ExtraColumn {
  std::string name;
  std::vector<double> values;
};

std::string series_csv(const TimeSeriesRecord& record, const std::vector<ExtraColumn>& extra = {});

struct LoadedSeries {
  std::string manifest_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Values of one column. Throws ConfigError if absent.
  std::vector<double> column(const std::string& name) const;
};

LoadedSeries load_series_csv(const std::string& path);

/// Column-wise mean over series files. Refuses files with differing manifest
/// hashes or shapes.
LoadedSeries aggregate_series(const std::vector<LoadedSeries>& series);

/// Log-spaced sample indices in [0, last]; always holds 0, 1 and last.
std::vector<std::size_t> log_spaced_indices(std::size_t last, int points_per_decade);

/// Result of one command: the manifest (already written to out_dir).
struct CommandResult {
  RunManifest manifest;
};

CommandResult cmd_evolve(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_sweep(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_longtime(const RunConfig& config, const std::string& out_dir);
/// With no inputs the ensemble-mean M at config.physics.epsilon is analysed;
/// otherwise the M_raw columns of the given series files are averaged.
CommandResult cmd_spectrum(const RunConfig& config, const std::string& out_dir,
                           const std::vector<std::string>& inputs = {});
CommandResult cmd_lindblad(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_leakage(const RunConfig& config, const std::string& out_dir);
CommandResult cmd_correct(const RunConfig& config, const std::string& out_dir);

}  // namespace floquet
