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

#include "floquet/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "floquet/floquet_driver.hpp"
#include "floquet/parallel.hpp"

namespace floquet {

namespace {

using Json = nlohmann::json;

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string exact_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += exact(v[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = lower(trim(value));
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": '" + value + "' is not a number");
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": '" + value + "' is not an integer");
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v.empty() || v[0] == '-') throw ConfigError(key + ": '" + value + "' is not an unsigned integer");
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError(key + ": '" + value + "' is not an unsigned integer");
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  const long long v = to_integer(key, value);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(key + " is out of range");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(trim(value));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError(key + " is empty");
  return out;
}

// A single value is broadcast over every bond.
std::vector<double> bond_couplings(const std::string& key, const std::string& value, int bonds) {
  std::vector<double> mhz = to_list(key, value);
  if (mhz.size() == 1) mhz.assign(std::max(bonds, 0), mhz.front());
  for (double& j : mhz) j = mhz_to_rad_per_ns(j);
  return mhz;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

int resolve_workers(const RunConfig& config) {
  return config.workers > 0 ? config.workers : default_worker_count();
}

std::vector<DisorderRealization> draw_realizations(const RunConfig& config, int count) {
  std::vector<DisorderRealization> out;
  out.reserve(count);
  for (int r = 0; r < count; ++r) {
    out.push_back(DisorderRealization::draw(config.physics.chain_length,
                                            derive_seed(config.master_seed, r)));
  }
  return out;
}

// Bookkeeping shared by every command.
class Session {
 public:
  Session(std::string command, const RunConfig& config, const std::string& out_dir,
          const std::string& extra_inputs = {})
      : dir_(out_dir), start_(std::chrono::steady_clock::now()) {
    config.validate();
    manifest_.command = std::move(command);
    manifest_.config_text = canonical_run_text(manifest_.command, config) + extra_inputs;
    manifest_.manifest_hash = content_hash(manifest_.config_text);
    manifest_.master_seed = config.master_seed;
    manifest_.workers = resolve_workers(config);
    manifest_.started_utc = utc_now();
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir_.string());
  }

  const std::string& hash() const { return manifest_.manifest_hash; }
  RunManifest& manifest() { return manifest_; }

  void write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    write_text(path, text);
    manifest_.outputs.push_back(path.string());
  }

  std::string csv_header() const { return "# manifest_hash=" + manifest_.manifest_hash + "\n"; }

  CommandResult finish() {
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text(dir_ / (manifest_.command + "_manifest.json"), manifest_.to_json());
    return {manifest_};
  }

 private:
  std::filesystem::path dir_;
  std::chrono::steady_clock::time_point start_;
  RunManifest manifest_;
};

// Pure evolution that hands the state at every mark to `visit`.
void evolve_states(const RunConfig& config, const DisorderRealization& realization,
                   const std::function<void(int, double, const StateVector&)>& visit) {
  const StagePropagators stages = StagePropagators::build(config.physics, realization);
  const Propagator half = stages.half_cycle();
  const FloquetSchedule schedule = FloquetSchedule::from_config(config.physics);
  StateVector psi = config.initial();
  Vector scratch(psi.dim());
  visit(0, 0.0, psi);
  for (int n = 1; n <= config.half_periods; ++n) {
    apply_inplace(half, psi, scratch);
    if (n % 2 == 0 && stages.interaction) apply_inplace(*stages.interaction, psi, scratch);
    visit(n, schedule.half_period_time(n), psi);
  }
}

TimeSeriesRecord shot_sampled_series(const RunConfig& config, const DisorderRealization& realization) {
  const ReadoutCalibration cal = config.readout();
  TimeSeriesRecord record;
  record.realization_seed = realization.seed;
  evolve_states(config, realization, [&](int n, double t, const StateVector& psi) {
    const ShotBatch batch = sample_shots(psi, cal, config.shots, derive_seed(realization.seed, n));
    const CorrectedMarginals c = correct_marginals(batch, cal);
    record.points.push_back(make_point(n, t, c.site_z, c.pair_zz));
  });
  return record;
}

FloquetConfig leading_sites(const FloquetConfig& config, int sites) {
  FloquetConfig out = config;
  out.chain_length = sites;
  out.j1.resize(std::max(sites - 1, 0));
  out.j2.resize(std::max(sites - 2, 0));
  return out;
}

NoiseModel leading_noise(const NoiseModel& noise, int sites) {
  NoiseModel out = noise;
  out.t1_us.resize(sites);
  out.t2star_us.resize(sites);
  return out;
}

}  // namespace

std::string to_string(EvolveMode mode) {
  switch (mode) {
    case EvolveMode::kPure: return "pure";
    case EvolveMode::kOpen: return "open";
    case EvolveMode::kShots: return "shots";
  }
  return "pure";
}

EvolveMode parse_evolve_mode(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "pure") return EvolveMode::kPure;
  if (t == "open" || t == "lindblad") return EvolveMode::kOpen;
  if (t == "shots") return EvolveMode::kShots;
  throw ConfigError("unknown mode '" + text + "' (expected pure, open or shots)");
}

RunConfig RunConfig::defaults(int length) {
  RunConfig c;
  c.physics = FloquetConfig::with_defaults(length);
  c.leakage_sites = std::min(length, kMaxQutritSites);
  return c;
}

StateVector RunConfig::initial() const {
  if (initial_state.empty()) return StateVector::ground(physics.chain_length);
  return StateVector::from_bitstring(initial_state);
}

NoiseModel RunConfig::noise() const {
  switch (noise_source) {
    case NoiseSource::kDevice: return NoiseModel::device_defaults(physics.chain_length);
    case NoiseSource::kNone: return NoiseModel::noiseless(physics.chain_length);
    case NoiseSource::kCustom: return custom_noise;
  }
  return NoiseModel::noiseless(physics.chain_length);
}

ReadoutCalibration RunConfig::readout() const {
  return custom_calibration ? calibration : ReadoutCalibration::device_defaults(physics.chain_length);
}

void RunConfig::validate() const {
  physics.validate();
  const int L = physics.chain_length;
  if (!initial_state.empty() && static_cast<int>(initial_state.size()) != L) {
    throw ConfigError("initial_state must have " + std::to_string(L) + " characters");
  }
  initial();
  if (realizations < 1) throw ConfigError("realizations must be at least 1");
  if (half_periods < 1) throw ConfigError("half_periods must be at least 1");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (shots < 1) throw ConfigError("shots must be at least 1");
  if (epsilon_grid.empty()) throw ConfigError("epsilon_grid is empty");
  for (double e : epsilon_grid) {
    if (!std::isfinite(e) || std::abs(e) > 1.0) throw ConfigError("epsilon_grid values must lie in [-1, 1]");
  }
  if (noise_source == NoiseSource::kCustom) custom_noise.validate(L);
  if (custom_calibration) {
    calibration.validate();
    if (calibration.sites() != L) throw ConfigError("readout calibration must list one value per site");
  }
  if (longtime_periods < 1) throw ConfigError("longtime periods must be at least 1");
  if (longtime_realizations < 1) throw ConfigError("longtime realizations must be at least 1");
  if (longtime_points_per_decade < 1) throw ConfigError("points_per_decade must be at least 1");
  if (lifetime.window < 1) throw ConfigError("lifetime window must be at least 1");
  if (!(lifetime.threshold > 0.0 && lifetime.threshold < 1.0)) {
    throw ConfigError("lifetime threshold must lie in (0, 1)");
  }
  if (!(peak_threshold > 0.0 && peak_threshold <= 1.0)) throw ConfigError("peak threshold must lie in (0, 1]");
  if (!(peak_f_low >= 0.0 && peak_f_low <= peak_f_high && peak_f_high <= 0.5)) {
    throw ConfigError("peak window must satisfy 0 <= f_low <= f_high <= 0.5");
  }
  if (!(open.max_step_ns > 0.0) || open.max_step_ns > LindbladIntegrator::kMaxStep) {
    throw ConfigError("max_step_ns must lie in (0, 0.5]");
  }
  if (open.min_steps_per_stage < 1) throw ConfigError("min_steps_per_stage must be at least 1");
  if (leakage_sites < 1 || leakage_sites > std::min(L, kMaxQutritSites)) {
    throw ConfigError("leakage sites must lie in [1, min(length, " + std::to_string(kMaxQutritSites) + ")]");
  }
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": line " + std::to_string(e.line()) + ": " + e.message());
  }

  int length = 10;
  if (auto chain = tree.get_child_optional("chain")) {
    if (auto v = chain->get_optional<std::string>("length")) length = to_int("chain.length", *v);
  }
  if (length < 1) throw ConfigError("chain.length must be at least 1");
  RunConfig c = RunConfig::defaults(std::min(length, 12));
  c.physics.chain_length = length;
  c.leakage_sites = std::min(length, kMaxQutritSites);

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> schema = {
      {"chain",
       {{"length", [](auto&, auto&) {}},
        {"initial_state", [&](auto&, auto& v) { c.initial_state = trim(v); }}}},
      {"drive",
       {{"epsilon", [&](auto& k, auto& v) { c.physics.epsilon = to_double(k, v); }},
        {"t1_ns", [&](auto& k, auto& v) { c.physics.t1_flip = to_double(k, v); }},
        {"t2_ns", [&](auto& k, auto& v) { c.physics.t2_disorder = to_double(k, v); }},
        {"t3_ns", [&](auto& k, auto& v) { c.physics.t3_int = to_double(k, v); }}}},
      {"interaction",
       {{"kind", [&](auto&, auto& v) { c.physics.interaction_kind = parse_interaction_kind(trim(v)); }},
        {"j1_mhz", [&](auto& k, auto& v) { c.physics.j1 = bond_couplings(k, v, length - 1); }},
        {"j2_mhz", [&](auto& k, auto& v) { c.physics.j2 = bond_couplings(k, v, length - 2); }},
        {"anharmonicity_mhz",
         [&](auto& k, auto& v) { c.physics.qutrit_anharmonicity = mhz_to_rad_per_ns(to_double(k, v)); }}}},
      {"disorder",
       {{"seed", [&](auto& k, auto& v) { c.master_seed = to_unsigned(k, v); }},
        {"realizations", [&](auto& k, auto& v) { c.realizations = to_int(k, v); }}}},
      {"run",
       {{"half_periods", [&](auto& k, auto& v) { c.half_periods = to_int(k, v); }},
        {"workers", [&](auto& k, auto& v) { c.workers = to_int(k, v); }},
        {"mode", [&](auto&, auto& v) { c.mode = parse_evolve_mode(v); }},
        {"shots", [&](auto& k, auto& v) { c.shots = to_unsigned(k, v); }},
        {"epsilon_grid", [&](auto& k, auto& v) { c.epsilon_grid = to_list(k, v); }}}},
      {"noise",
       {{"model",
         [&](auto&, auto& v) {
           const std::string m = lower(trim(v));
           if (m == "device") {
             c.noise_source = NoiseSource::kDevice;
           } else if (m == "none") {
             c.noise_source = NoiseSource::kNone;
           } else if (m == "custom") {
             c.noise_source = NoiseSource::kCustom;
           } else {
             throw ConfigError("noise.model must be device, none or custom");
           }
         }},
        {"t1_us", [&](auto& k, auto& v) { c.custom_noise.t1_us = to_list(k, v); }},
        {"t2star_us", [&](auto& k, auto& v) { c.custom_noise.t2star_us = to_list(k, v); }},
        {"max_step_ns", [&](auto& k, auto& v) { c.open.max_step_ns = to_double(k, v); }},
        {"min_steps_per_stage", [&](auto& k, auto& v) { c.open.min_steps_per_stage = to_int(k, v); }}}},
      {"readout",
       {{"f00", [&](auto& k, auto& v) { c.calibration.f00 = to_list(k, v); }},
        {"f11", [&](auto& k, auto& v) { c.calibration.f11 = to_list(k, v); }}}},
      {"longtime",
       {{"periods", [&](auto& k, auto& v) { c.longtime_periods = to_int(k, v); }},
        {"realizations", [&](auto& k, auto& v) { c.longtime_realizations = to_int(k, v); }},
        {"points_per_decade", [&](auto& k, auto& v) { c.longtime_points_per_decade = to_int(k, v); }},
        {"window",
         [&](auto& k, auto& v) {
           const int w = to_int(k, v);
           if (w < 1) throw ConfigError("longtime.window must be at least 1");
           c.lifetime.window = static_cast<std::size_t>(w);
         }},
        {"threshold", [&](auto& k, auto& v) { c.lifetime.threshold = to_double(k, v); }}}},
      {"spectrum",
       {{"threshold", [&](auto& k, auto& v) { c.peak_threshold = to_double(k, v); }},
        {"f_low", [&](auto& k, auto& v) { c.peak_f_low = to_double(k, v); }},
        {"f_high", [&](auto& k, auto& v) { c.peak_f_high = to_double(k, v); }}}},
      {"leakage",
       {{"sites", [&](auto& k, auto& v) { c.leakage_sites = to_int(k, v); }},
        {"noise", [&](auto& k, auto& v) { c.leakage_noise = to_bool(k, v); }},
        {"mapping",
         [&](auto&, auto& v) {
           const std::string m = lower(trim(v));
           if (m == "dichotomic") {
             c.leakage_mapping = ReadoutMapping::kDichotomic;
           } else if (m == "qubit_only") {
             c.leakage_mapping = ReadoutMapping::kQubitOnly;
           } else {
             throw ConfigError("leakage.mapping must be dichotomic or qubit_only");
           }
         }}}},
  };

  for (const auto& [section, body] : tree) {
    const auto it = schema.find(section);
    if (it == schema.end()) {
      throw ConfigError(origin + ": unknown " + (body.empty() ? "top-level key" : "section") + " '" +
                        section + "'");
    }
    for (const auto& [key, node] : body) {
      const auto setter = it->second.find(key);
      if (setter == it->second.end()) throw ConfigError(origin + ": unknown key '" + section + "." + key + "'");
      setter->second(section + "." + key, node.data());
    }
  }
  if (!c.calibration.f00.empty() || !c.calibration.f11.empty()) {
    c.custom_calibration = true;
    for (auto* list : {&c.calibration.f00, &c.calibration.f11}) {
      if (std::any_of(list->begin(), list->end(), [](double v) { return v > 1.0; })) {
        for (double& v : *list) v /= 100.0;
      }
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path);
}

std::string canonical_run_text(const std::string& command, const RunConfig& c) {
  std::string out = "command=" + command + "\n";
  out += canonical_text(c.physics);
  out += "initial_state=" + (c.initial_state.empty() ? std::string(c.physics.chain_length, '0') : c.initial_state) + "\n";
  out += "master_seed=" + std::to_string(c.master_seed) + "\n";
  out += "realizations=" + std::to_string(c.realizations) + "\n";
  out += "half_periods=" + std::to_string(c.half_periods) + "\n";
  out += "mode=" + to_string(c.mode) + "\n";
  out += "shots=" + std::to_string(c.shots) + "\n";
  out += "epsilon_grid=" + exact_list(c.epsilon_grid) + "\n";
  const NoiseModel noise = c.noise();
  out += "noise_t1_us=" + exact_list(noise.t1_us) + "\n";
  out += "noise_t2star_us=" + exact_list(noise.t2star_us) + "\n";
  out += "max_step_ns=" + exact(c.open.max_step_ns) + "\n";
  out += "min_steps_per_stage=" + std::to_string(c.open.min_steps_per_stage) + "\n";
  if (c.physics.chain_length <= 10 || c.custom_calibration) {
    const ReadoutCalibration cal = c.readout();
    out += "readout_f00=" + exact_list(cal.f00) + "\n";
    out += "readout_f11=" + exact_list(cal.f11) + "\n";
  }
  out += "longtime_periods=" + std::to_string(c.longtime_periods) + "\n";
  out += "longtime_realizations=" + std::to_string(c.longtime_realizations) + "\n";
  out += "points_per_decade=" + std::to_string(c.longtime_points_per_decade) + "\n";
  out += "lifetime_window=" + std::to_string(c.lifetime.window) + "\n";
  out += "lifetime_threshold=" + exact(c.lifetime.threshold) + "\n";
  out += "peak_threshold=" + exact(c.peak_threshold) + "\n";
  out += "peak_window=" + exact(c.peak_f_low) + "," + exact(c.peak_f_high) + "\n";
  out += "leakage_sites=" + std::to_string(c.leakage_sites) + "\n";
  out += "leakage_noise=" + std::string(c.leakage_noise ? "true" : "false") + "\n";
  out += "leakage_mapping=" +
         std::string(c.leakage_mapping == ReadoutMapping::kDichotomic ? "dichotomic" : "qubit_only") + "\n";
  return out;
}

std::string RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["manifest_hash"] = manifest_hash;
  Json config = Json::object();
  std::istringstream lines(config_text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) config[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["config"] = config;
  j["master_seed"] = master_seed;
  j["realization_seeds"] = realization_seeds;
  j["outputs"] = outputs;
  j["timing"] = {{"started_utc", started_utc}, {"wall_seconds", wall_seconds}, {"workers", workers}};
  return j.dump(2) + "\n";
}

std::string series_csv(const TimeSeriesRecord& record, const std::vector<ExtraColumn>& extra) {
  for (const auto& col : extra) {
    if (col.values.size() != record.size()) throw ConfigError("column " + col.name + " has the wrong length");
  }
  std::string out = "# manifest_hash=" + record.config_hash + "\n";
  const int L = record.points.empty() ? 0 : static_cast<int>(record.points.front().site_z.size());
  out += "half_period_index,time_ns,M_raw,M_staggered,chi_sg";
  for (int s = 1; s <= L; ++s) out += ",z_" + std::to_string(s);
  for (const auto& col : extra) out += "," + col.name;
  out += "\n";
  for (std::size_t k = 0; k < record.size(); ++k) {
    const ObservablePoint& p = record.points[k];
    const double sign = (p.half_period_index % 2 == 0) ? 1.0 : -1.0;
    out += std::to_string(p.half_period_index) + "," + exact(p.time_ns) + "," + exact(p.magnetization) +
           "," + exact(sign * p.magnetization) + "," + exact(p.chi_sg);
    for (double z : p.site_z) out += "," + exact(z);
    for (const auto& col : extra) out += "," + exact(col.values[k]);
    out += "\n";
  }
  return out;
}

std::vector<double> LoadedSeries::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("series has no column '" + name + "'");
  const std::size_t c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

LoadedSeries load_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open series file " + path);
  LoadedSeries out;
  std::string line;
  const std::string tag = "# manifest_hash=";
  if (!std::getline(in, line) || line.rfind(tag, 0) != 0) {
    throw ConfigError(path + ": missing manifest hash line");
  }
  out.manifest_hash = trim(line.substr(tag.size()));
  if (!std::getline(in, line)) throw ConfigError(path + ": missing header");
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) out.columns.push_back(trim(name));
  }
  std::size_t number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(to_double(path + ":" + std::to_string(number), cell));
    if (row.size() != out.columns.size()) throw ConfigError(path + ": row " + std::to_string(number) + " has the wrong width");
    out.rows.push_back(std::move(row));
  }
  return out;
}

LoadedSeries aggregate_series(const std::vector<LoadedSeries>& series) {
  if (series.empty()) throw ConfigError("nothing to aggregate");
  const LoadedSeries& first = series.front();
  for (const auto& s : series) {
    if (s.manifest_hash != first.manifest_hash) {
      throw ConfigError("refusing to aggregate series with different manifest hashes (" + first.manifest_hash +
                        " vs " + s.manifest_hash + ")");
    }
    if (s.columns != first.columns || s.rows.size() != first.rows.size()) {
      throw ConfigError("refusing to aggregate series with different shapes");
    }
  }
  LoadedSeries out = first;
  const double n = static_cast<double>(series.size());
  for (std::size_t r = 0; r < out.rows.size(); ++r) {
    for (std::size_t c = 0; c < out.columns.size(); ++c) {
      double acc = 0.0;
      for (const auto& s : series) acc += s.rows[r][c];
      out.rows[r][c] = acc / n;
    }
  }
  return out;
}

std::vector<std::size_t> log_spaced_indices(std::size_t last, int points_per_decade) {
  if (points_per_decade < 1) throw ConfigError("points_per_decade must be at least 1");
  std::set<std::size_t> picked{0, last};
  if (last >= 1) picked.insert(1);
  const double top = last > 0 ? std::log10(static_cast<double>(last)) : 0.0;
  for (int k = 0; k <= static_cast<int>(std::ceil(top * points_per_decade)); ++k) {
    const double v = std::round(std::pow(10.0, static_cast<double>(k) / points_per_decade));
    if (v <= static_cast<double>(last)) picked.insert(static_cast<std::size_t>(v));
  }
  return {picked.begin(), picked.end()};
}

CommandResult cmd_evolve(const RunConfig& config, const std::string& out_dir) {
  Session session("evolve", config, out_dir);
  const DisorderRealization realization =
      DisorderRealization::draw(config.physics.chain_length, derive_seed(config.master_seed, 0));
  session.manifest().realization_seeds = {realization.seed};

  TimeSeriesRecord record;
  std::vector<ExtraColumn> extra;
  switch (config.mode) {
    case EvolveMode::kPure:
      record = run_stroboscopic(config.physics, realization, config.initial(), config.half_periods);
      break;
    case EvolveMode::kOpen: {
      const OpenSeriesRecord open =
          run_open_floquet(config.physics, realization, config.noise(),
                           DensityMatrix::from_state(config.initial()), config.half_periods, config.open);
      record = open.record;
      extra = {{"trace", open.trace}, {"min_eigenvalue", open.min_eigenvalue}};
      break;
    }
    case EvolveMode::kShots:
      record = shot_sampled_series(config, realization);
      break;
  }
  record.config_hash = session.hash();
  record.realization_seed = realization.seed;
  session.write("evolve.csv", series_csv(record, extra));
  return session.finish();
}

CommandResult cmd_sweep(const RunConfig& config, const std::string& out_dir) {
  Session session("sweep", config, out_dir);
  const auto realizations = draw_realizations(config, config.realizations);
  for (const auto& r : realizations) session.manifest().realization_seeds.push_back(r.seed);

  PhaseDiagram diagram;
  try {
    diagram = phase_diagram(config.physics, config.epsilon_grid, realizations, config.half_periods,
                            config.initial(), resolve_workers(config));
  } catch (const ResourceLimitError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("sweep worker failed: ") + e.what() +
                             "; partial results directory: " + out_dir);
  }

  const FloquetSchedule schedule = FloquetSchedule::from_config(config.physics);
  std::vector<int> index(config.half_periods + 1);
  std::vector<double> times(config.half_periods + 1);
  for (int n = 0; n <= config.half_periods; ++n) {
    index[n] = n;
    times[n] = schedule.half_period_time(n);
  }
  Json j;
  j["manifest_hash"] = session.hash();
  j["interaction"] = to_string(config.physics.interaction_kind);
  j["epsilon"] = diagram.epsilon;
  j["half_period_index"] = index;
  j["time_ns"] = times;
  j["mean_M"] = diagram.mean;
  j["std_M"] = diagram.stddev;
  j["mean_chi_sg"] = diagram.mean_chi_sg;
  j["std_chi_sg"] = diagram.stddev_chi_sg;
  j["count"] = diagram.count;
  j["realization_seeds"] = diagram.realization_seeds;
  session.write("sweep.json", j.dump(1) + "\n");
  return session.finish();
}

CommandResult cmd_longtime(const RunConfig& config, const std::string& out_dir) {
  constexpr int kMaxLongtimeSites = 6;
  constexpr int kMaxLongtimePeriods = 200000;
  if (config.physics.chain_length > kMaxLongtimeSites) {
    throw ResourceLimitError("longtime runs are limited to " + std::to_string(kMaxLongtimeSites) + " sites");
  }
  if (config.longtime_periods > kMaxLongtimePeriods) {
    throw ResourceLimitError("longtime runs are limited to " + std::to_string(kMaxLongtimePeriods) + " periods");
  }
  Session session("longtime", config, out_dir);
  const int L = config.physics.chain_length;
  const auto realizations = draw_realizations(config, config.longtime_realizations);
  for (const auto& r : realizations) session.manifest().realization_seeds.push_back(r.seed);
  const std::size_t P = static_cast<std::size_t>(config.longtime_periods);
  const auto keep = log_spaced_indices(P, config.longtime_points_per_decade);

  Json report;
  report["manifest_hash"] = session.hash();
  report["epsilon"] = config.physics.epsilon;
  report["periods"] = P;
  report["window"] = config.lifetime.window;
  report["threshold"] = config.lifetime.threshold;
  report["realizations"] = config.longtime_realizations;
  report["chi_sg_observable"] = "chi_sg - 1";

  for (InteractionKind kind : {InteractionKind::kXX, InteractionKind::kIsing}) {
    FloquetConfig physics = config.physics;
    physics.interaction_kind = kind;
    const double period = physics.period();
    const std::size_t R = realizations.size();
    std::vector<std::vector<double>> m(R, std::vector<double>(P + 1));
    std::vector<std::vector<double>> chi(R, std::vector<double>(P + 1));
    parallel_for(R, resolve_workers(config), [&](std::size_t r) {
      const Propagator u = build_period_unitary(physics, realizations[r]);
      StateVector psi = config.initial();
      Vector scratch(psi.dim());
      for (std::size_t n = 0; n <= P; ++n) {
        if (n > 0) apply_inplace(u, psi, scratch);
        const Eigen::VectorXd p = probabilities(psi);
        const ObservablePoint point =
            make_point(static_cast<int>(2 * n), 0.0, site_z_from_probabilities(p, L, 2),
                       pair_zz_from_probabilities(p, L, 2));
        m[r][n] = point.magnetization;
        chi[r][n] = point.chi_sg;
      }
    });
    std::vector<double> m_mean, m_sd, chi_mean, chi_sd;
    ensemble_moments(m, m_mean, m_sd);
    ensemble_moments(chi, chi_mean, chi_sd);
    std::vector<double> chi_excess(chi_mean.size());
    for (std::size_t n = 0; n < chi_mean.size(); ++n) chi_excess[n] = chi_mean[n] - 1.0;

    const std::size_t life_m = extract_lifetime(m_mean, config.lifetime);
    const std::size_t life_chi = extract_lifetime(chi_excess, config.lifetime);
    const std::string name = kind == InteractionKind::kXX ? "xx" : "ising";
    report[name] = {{"lifetime_M", life_m},
                    {"lifetime_chi_sg", life_chi},
                    {"log10_lifetime_M", std::log10(static_cast<double>(std::max<std::size_t>(life_m, 1)))},
                    {"log10_lifetime_chi_sg", std::log10(static_cast<double>(std::max<std::size_t>(life_chi, 1)))},
                    {"reached_M", life_m < P + 1},
                    {"reached_chi_sg", life_chi < P + 1},
                    {"period_ns", period}};

    std::string csv = session.csv_header() + "period_index,time_ns,M_staggered,chi_sg\n";
    for (std::size_t n : keep) {
      csv += std::to_string(n) + "," + exact(period * static_cast<double>(n)) + "," + exact(m_mean[n]) + "," +
             exact(chi_mean[n]) + "\n";
    }
    session.write("longtime_" + name + ".csv", csv);
  }
  session.write("longtime.json", report.dump(2) + "\n");
  return session.finish();
}

CommandResult cmd_spectrum(const RunConfig& config, const std::string& out_dir,
                           const std::vector<std::string>& inputs) {
  std::vector<LoadedSeries> loaded;
  std::string input_text;
  for (const auto& path : inputs) {
    loaded.push_back(load_series_csv(path));
    input_text += "input_hash=" + loaded.back().manifest_hash + "\n";
  }
  Session session("spectrum", config, out_dir, input_text);

  std::vector<double> series;
  if (loaded.empty()) {
    const auto realizations = draw_realizations(config, config.realizations);
    for (const auto& r : realizations) session.manifest().realization_seeds.push_back(r.seed);
    const PhaseDiagram d = phase_diagram(config.physics, {config.physics.epsilon}, realizations,
                                         config.half_periods, config.initial(), resolve_workers(config));
    series = d.mean.front();
  } else {
    series = aggregate_series(loaded).column("M_raw");
  }
  const Spectrum spec = magnitude_spectrum(series, true);
  const std::size_t peaks = count_peaks(spec, config.peak_threshold, config.peak_f_low, config.peak_f_high);

  std::string csv = session.csv_header() + "frequency,magnitude\n";
  for (std::size_t k = 0; k < spec.frequency.size(); ++k) {
    csv += exact(spec.frequency[k]) + "," + exact(spec.magnitude[k]) + "\n";
  }
  session.write("spectrum.csv", csv);

  const double global = *std::max_element(spec.magnitude.begin(), spec.magnitude.end());
  Json maxima = Json::array();
  for (std::size_t k : spec.local_maxima()) {
    if (spec.magnitude[k] >= config.peak_threshold * global) {
      maxima.push_back({{"frequency", spec.frequency[k]}, {"relative_magnitude", spec.magnitude[k] / global}});
    }
  }
  Json j;
  j["manifest_hash"] = session.hash();
  j["series_length"] = spec.series_length;
  j["padded_length"] = spec.padded_length;
  j["peak_threshold"] = config.peak_threshold;
  j["peak_window"] = {config.peak_f_low, config.peak_f_high};
  j["peaks_in_window"] = peaks;
  j["maxima_above_threshold"] = maxima;
  session.write("spectrum.json", j.dump(2) + "\n");
  return session.finish();
}

CommandResult cmd_lindblad(const RunConfig& config, const std::string& out_dir) {
  Session session("lindblad", config, out_dir);
  const DisorderRealization realization =
      DisorderRealization::draw(config.physics.chain_length, derive_seed(config.master_seed, 0));
  session.manifest().realization_seeds = {realization.seed};
  OpenSeriesRecord open =
      run_open_floquet(config.physics, realization, config.noise(), DensityMatrix::from_state(config.initial()),
                       config.half_periods, config.open);
  open.record.config_hash = session.hash();
  open.record.realization_seed = realization.seed;
  session.write("lindblad.csv", series_csv(open.record, {{"trace", open.trace},
                                                        {"min_eigenvalue", open.min_eigenvalue},
                                                        {"hermiticity_error", open.hermiticity_error}}));
  return session.finish();
}

CommandResult cmd_leakage(const RunConfig& config, const std::string& out_dir) {
  Session session("leakage", config, out_dir);
  const int sites = config.leakage_sites;
  const FloquetConfig physics = leading_sites(config.physics, sites);
  const DisorderRealization full =
      DisorderRealization::draw(config.physics.chain_length, derive_seed(config.master_seed, 0));
  DisorderRealization realization = full;
  realization.phases.resize(sites);
  session.manifest().realization_seeds = {realization.seed};

  LeakageOptions options;
  options.with_noise = config.leakage_noise;
  options.noise = leading_noise(config.noise(), sites);
  options.mapping = config.leakage_mapping;
  options.integrator = config.open;
  const std::string bits = config.initial_state.empty() ? std::string(sites, '0') : config.initial_state.substr(0, sites);
  LeakageResult result =
      run_leakage(physics, realization, StateVector::from_bitstring(bits, 3), config.half_periods, options);
  result.record.config_hash = session.hash();
  result.record.realization_seed = realization.seed;
  session.write("leakage.csv",
                series_csv(result.record, {{"pop2", result.pop2}, {"total_population", result.total_population}}));
  return session.finish();
}

CommandResult cmd_correct(const RunConfig& config, const std::string& out_dir) {
  Session session("correct", config, out_dir);
  const int L = config.physics.chain_length;
  const DisorderRealization realization = DisorderRealization::draw(L, derive_seed(config.master_seed, 0));
  session.manifest().realization_seeds = {realization.seed};
  StateVector final_state;
  evolve_states(config, realization, [&](int n, double, const StateVector& psi) {
    if (n == config.half_periods) final_state = psi;
  });
  const ReadoutCalibration cal = config.readout();
  const ShotBatch batch = sample_shots(final_state, cal, config.shots, derive_seed(realization.seed, config.half_periods));
  const CorrectedMarginals corrected = correct_marginals(batch, cal);
  const std::vector<double> raw = raw_site_z(batch);
  const std::vector<double> exact_z = site_z_expectations(final_state);
  const RealMatrix exact_zz = pair_zz_expectations(final_state);
  const CorrectedMarginals uncorrected = correct_distribution(batch.empirical_distribution(), ReadoutCalibration::perfect(L));

  std::string csv = session.csv_header() + "site,exact_z,raw_z,corrected_z,corrected_z_unclipped\n";
  for (int s = 0; s < L; ++s) {
    csv += std::to_string(s + 1) + "," + exact(exact_z[s]) + "," + exact(raw[s]) + "," +
           exact(corrected.site_z[s]) + "," + exact(corrected.raw_site_z[s]) + "\n";
  }
  session.write("correct.csv", csv);

  auto matrix_json = [](const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (Eigen::Index k = 0; k < m.cols(); ++k) row[k] = m(i, k);
      rows.push_back(row);
    }
    return rows;
  };
  Json j;
  j["manifest_hash"] = session.hash();
  j["half_period_index"] = config.half_periods;
  j["shots"] = config.shots;
  j["shot_seed"] = batch.seed;
  j["f00"] = cal.f00;
  j["f11"] = cal.f11;
  j["pair_zz_exact"] = matrix_json(exact_zz);
  j["pair_zz_raw"] = matrix_json(uncorrected.raw_pair_zz);
  j["pair_zz_corrected"] = matrix_json(corrected.pair_zz);
  j["pair_zz_corrected_unclipped"] = matrix_json(corrected.raw_pair_zz);
  j["chi_sg_exact"] = spin_glass_order(exact_zz);
  j["chi_sg_raw"] = spin_glass_order(uncorrected.pair_zz);
  j["chi_sg_corrected"] = spin_glass_order(corrected.pair_zz);
  session.write("correct.json", j.dump(2) + "\n");
  return session.finish();
}

}  // namespace floquet
