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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "floquet/ensemble.hpp"

using namespace floquet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(testing::TempDir()) / ("floquet_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small(int L) {
  RunConfig c = RunConfig::defaults(L);
  c.half_periods = 20;
  c.realizations = 3;
  return c;
}

}  // namespace

TEST(Config, ParsesSectionsAndBroadcastsCouplings) {
  const RunConfig c = parse_run_config(
      "[chain]\nlength = 4\ninitial_state = 0101\n"
      "[drive]\nepsilon = 0.05\n"
      "[interaction]\nkind = ising\nj1_mhz = 5\n"
      "[disorder]\nseed = 99\nrealizations = 7\n"
      "[run]\nhalf_periods = 30\nepsilon_grid = 0, 0.1\n"
      "; comment\n[noise]\nmodel = none\n");
  EXPECT_EQ(c.physics.chain_length, 4);
  EXPECT_EQ(c.physics.j1.size(), 3u);
  EXPECT_NEAR(c.physics.j1[2], mhz_to_rad_per_ns(5.0), 1e-15);
  EXPECT_EQ(c.physics.interaction_kind, InteractionKind::kIsing);
  EXPECT_EQ(c.master_seed, 99u);
  EXPECT_EQ(c.realizations, 7);
  EXPECT_EQ(c.epsilon_grid.size(), 2u);
  EXPECT_TRUE(c.noise().is_noiseless());
  EXPECT_EQ(c.initial().amplitudes()(5), Complex(1.0, 0.0));
}

TEST(Config, RejectsUnknownAndMalformedEntries) {
  EXPECT_THROW(parse_run_config("[drive]\nepsilonn = 0.1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("[physics]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_run_config("[drive]\nepsilon = abc\n"), ConfigError);
  EXPECT_THROW(parse_run_config("[chain]\nlength = 4\ninitial_state = 01\n"), ConfigError);
  EXPECT_THROW(parse_run_config("[chain]\nlength = 3\n[interaction]\nj1_mhz = 1, 2, 3\n"), ConfigError);
  EXPECT_THROW(parse_run_config("[chain]\nlength = 13\n"), ResourceLimitError);
  try {
    load_run_config("/nonexistent/dir/run.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/run.ini"), std::string::npos);
  }
}

TEST(Config, HashIgnoresWorkers) {
  RunConfig a = small(4), b = small(4);
  b.workers = 8;
  EXPECT_EQ(canonical_run_text("sweep", a), canonical_run_text("sweep", b));
  b.master_seed += 1;
  EXPECT_NE(canonical_run_text("sweep", a), canonical_run_text("sweep", b));
}

TEST(Evolve, AlternatingMagnetizationAtZeroEpsilon) {
  RunConfig c = small(6);
  c.half_periods = 100;
  const auto dir = scratch("evolve0");
  cmd_evolve(c, dir.string());
  const LoadedSeries s = load_series_csv((dir / "evolve.csv").string());
  const auto m = s.column("M_raw");
  ASSERT_EQ(m.size(), 101u);
  for (std::size_t n = 0; n < m.size(); ++n) EXPECT_NEAR(m[n], n % 2 ? -1.0 : 1.0, 1e-12);
  EXPECT_EQ(s.columns[5], "z_1");
  EXPECT_TRUE(fs::exists(dir / "evolve_manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "evolve_manifest.json"));
  EXPECT_EQ(manifest["manifest_hash"], s.manifest_hash);
  EXPECT_EQ(manifest["realization_seeds"].size(), 1u);
}

TEST(Evolve, RerunIsByteIdentical) {
  RunConfig c = small(5);
  c.physics.epsilon = 0.1;
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  cmd_evolve(c, a.string());
  cmd_evolve(c, b.string());
  EXPECT_EQ(slurp(a / "evolve.csv"), slurp(b / "evolve.csv"));
  c.mode = EvolveMode::kShots;
  c.shots = 500;
  cmd_evolve(c, a.string());
  cmd_evolve(c, b.string());
  EXPECT_EQ(slurp(a / "evolve.csv"), slurp(b / "evolve.csv"));
}

TEST(Sweep, SingleCellReducesToEvolve) {
  RunConfig c = small(5);
  c.physics.epsilon = 0.08;
  c.epsilon_grid = {0.08};
  c.realizations = 1;
  const auto dir = scratch("sweep1");
  cmd_sweep(c, dir.string());
  cmd_evolve(c, dir.string());
  const auto j = nlohmann::json::parse(slurp(dir / "sweep.json"));
  const auto m = load_series_csv((dir / "evolve.csv").string()).column("M_raw");
  const auto mean = j["mean_M"][0].get<std::vector<double>>();
  ASSERT_EQ(mean.size(), m.size());
  for (std::size_t n = 0; n < m.size(); ++n) EXPECT_DOUBLE_EQ(mean[n], m[n]);
}

TEST(Sweep, WorkerCountDoesNotChangeOutput) {
  RunConfig c = small(5);
  c.epsilon_grid = {0.0, 0.1, 0.2};
  std::string reference;
  for (int w : {1, 2, 5}) {
    c.workers = w;
    const auto dir = scratch("sweepw" + std::to_string(w));
    cmd_sweep(c, dir.string());
    const std::string text = slurp(dir / "sweep.json");
    if (reference.empty()) reference = text;
    EXPECT_EQ(text, reference) << w;
  }
}

TEST(Lindblad, ZeroRatesMatchEvolve) {
  RunConfig c = small(4);
  c.physics.epsilon = 0.12;
  c.noise_source = NoiseSource::kNone;
  const auto dir = scratch("lind");
  cmd_evolve(c, dir.string());
  cmd_lindblad(c, dir.string());
  const auto pure = load_series_csv((dir / "evolve.csv").string());
  const auto open = load_series_csv((dir / "lindblad.csv").string());
  for (const std::string col : {"M_raw", "M_staggered", "chi_sg", "z_1", "z_4"}) {
    const auto a = pure.column(col), b = open.column(col);
    for (std::size_t n = 0; n < a.size(); ++n) EXPECT_NEAR(a[n], b[n], 1e-7) << col << " " << n;
  }
  const auto trace = open.column("trace");
  for (double t : trace) EXPECT_NEAR(t, 1.0, 1e-9);
}

TEST(Spectrum, SyntheticAlternatingInput) {
  const auto dir = scratch("spec");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "alt.csv");
    out << "# manifest_hash=abc\nhalf_period_index,M_raw\n";
    for (int n = 0; n < 64; ++n) out << n << "," << (n % 2 ? -1 : 1) << "\n";
  }
  cmd_spectrum(small(3), dir.string(), {(dir / "alt.csv").string()});
  const auto j = nlohmann::json::parse(slurp(dir / "spectrum.json"));
  EXPECT_EQ(j["peaks_in_window"], 1);
  EXPECT_DOUBLE_EQ(j["maxima_above_threshold"][0]["frequency"].get<double>(), 0.5);
}

TEST(Loader, RefusesMixedHashes) {
  const auto dir = scratch("mixed");
  RunConfig a = small(3), b = small(3);
  b.physics.epsilon = 0.2;
  cmd_evolve(a, (dir / "a").string());
  cmd_evolve(b, (dir / "b").string());
  const auto sa = load_series_csv((dir / "a" / "evolve.csv").string());
  const auto sb = load_series_csv((dir / "b" / "evolve.csv").string());
  EXPECT_THROW(aggregate_series({sa, sb}), ConfigError);
  const auto same = aggregate_series({sa, sa});
  EXPECT_EQ(same.rows, sa.rows);
  EXPECT_THROW(cmd_spectrum(a, (dir / "s").string(),
                            {(dir / "a" / "evolve.csv").string(), (dir / "b" / "evolve.csv").string()}),
               ConfigError);
}

TEST(Longtime, LogSpacedIndices) {
  const auto idx = log_spaced_indices(200000, 10);
  EXPECT_EQ(idx.front(), 0u);
  EXPECT_EQ(idx[1], 1u);
  EXPECT_EQ(idx.back(), 200000u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  EXPECT_LT(idx.size(), 60u);
  const auto tiny = log_spaced_indices(1, 10);
  EXPECT_EQ(tiny, (std::vector<std::size_t>{0, 1}));
}

TEST(Longtime, ZeroEpsilonNeverDecays) {
  RunConfig c = small(4);
  c.longtime_periods = 3000;
  const auto dir = scratch("long0");
  cmd_longtime(c, dir.string());
  const auto j = nlohmann::json::parse(slurp(dir / "longtime.json"));
  for (const char* kind : {"xx", "ising"}) {
    EXPECT_EQ(j[kind]["lifetime_M"], 3001);
    EXPECT_EQ(j[kind]["lifetime_chi_sg"], 3001);
  }
  EXPECT_TRUE(fs::exists(dir / "longtime_xx.csv"));
  RunConfig big = small(7);
  EXPECT_THROW(cmd_longtime(big, dir.string()), ResourceLimitError);
}

TEST(Correct, WritesCorrectedMarginals) {
  RunConfig c = small(4);
  c.half_periods = 2;
  c.shots = 200000;
  const auto dir = scratch("correct");
  cmd_correct(c, dir.string());
  const auto j = nlohmann::json::parse(slurp(dir / "correct.json"));
  EXPECT_NEAR(j["chi_sg_corrected"].get<double>(), 4.0, 0.05);
  EXPECT_LT(j["chi_sg_raw"].get<double>(), j["chi_sg_corrected"].get<double>());
}

TEST(Leakage, WritesPopulationColumns) {
  RunConfig c = small(3);
  c.physics.epsilon = 0.1;
  c.half_periods = 10;
  const auto dir = scratch("leak");
  cmd_leakage(c, dir.string());
  const auto s = load_series_csv((dir / "leakage.csv").string());
  for (double t : s.column("total_population")) EXPECT_NEAR(t, 1.0, 1e-9);
  EXPECT_GT(s.column("pop2").back(), 0.0);
}
