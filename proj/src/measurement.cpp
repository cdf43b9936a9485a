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

#include "floquet/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace floquet {

namespace {

constexpr double kF00[] = {0.936, 0.970, 0.924, 0.939, 0.902, 0.965, 0.937, 0.955, 0.925, 0.957};
constexpr double kF11[] = {0.860, 0.869, 0.834, 0.853, 0.783, 0.902, 0.834, 0.861, 0.821, 0.877};
constexpr int kTableSites = 10;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("calibration value '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

ReadoutCalibration ReadoutCalibration::device_defaults(int sites) {
  if (sites < 1 || sites > kTableSites) {
    throw ConfigError("device calibration covers 1.." + std::to_string(kTableSites) + " sites");
  }
  return {std::vector<double>(kF00, kF00 + sites), std::vector<double>(kF11, kF11 + sites)};
}

ReadoutCalibration ReadoutCalibration::perfect(int sites) {
  return {std::vector<double>(sites, 1.0), std::vector<double>(sites, 1.0)};
}

void ReadoutCalibration::validate() const {
  if (f00.size() != f11.size() || f00.empty()) throw ConfigError("calibration needs f00 and f11 per site");
  for (std::size_t i = 0; i < f00.size(); ++i) {
    for (double f : {f00[i], f11[i]}) {
      if (!(f > 0.5 && f <= 1.0)) {
        throw ConfigError("singular or invalid calibration: fidelities must lie in (0.5, 1]");
      }
    }
  }
}

Eigen::Matrix2d ReadoutCalibration::confusion(int site) const {
  Eigen::Matrix2d a;
  a << f00[site], 1.0 - f11[site], 1.0 - f00[site], f11[site];
  return a;
}

ReadoutCalibration load_calibration(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read calibration file " + path + ": " + e.message());
  }
  const auto f00 = tree.get_optional<std::string>("readout.f00");
  const auto f11 = tree.get_optional<std::string>("readout.f11");
  if (!f00 || !f11) throw ConfigError("calibration file " + path + " needs [readout] f00 and f11");
  ReadoutCalibration cal{parse_list(*f00), parse_list(*f11)};
  for (auto* list : {&cal.f00, &cal.f11}) {
    const bool percent = std::any_of(list->begin(), list->end(), [](double v) { return v > 1.0; });
    if (percent) {
      for (double& v : *list) v /= 100.0;
    }
  }
  cal.validate();
  return cal;
}

Eigen::VectorXd ShotBatch::empirical_distribution() const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p(static_cast<Eigen::Index>(k)) = static_cast<double>(counts[k]) / static_cast<double>(n_shots);
  }
  return p;
}

ShotBatch sample_shots(const StateVector& psi, const ReadoutCalibration& calibration,
                       std::uint64_t n_shots, std::uint64_t seed) {
  if (psi.local_dim() != 2) throw ConfigError("shot sampling expects a qubit state");
  if (n_shots < 1) throw ConfigError("n_shots must be at least 1");
  calibration.validate();
  const int L = psi.sites();
  if (calibration.sites() != L) throw ConfigError("calibration size does not match the state");

  const Eigen::VectorXd p = probabilities(psi);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  Eigen::Index last_nonzero = 0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    acc += p(k);
    cdf[k] = acc;
    if (p(k) > 0.0) last_nonzero = k;
  }

  ShotBatch batch;
  batch.sites = L;
  batch.n_shots = n_shots;
  batch.seed = seed;
  batch.counts.assign(p.size(), 0);
  std::mt19937_64 rng(seed);
  for (std::uint64_t shot = 0; shot < n_shots; ++shot) {
    const double u = unit_uniform(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::int64_t outcome = std::min<std::int64_t>(it - cdf.begin(), last_nonzero);
    for (int s = 0; s < L; ++s) {
      const std::int64_t mask = std::int64_t{1} << (L - 1 - s);
      const bool one = outcome & mask;
      const double error = one ? 1.0 - calibration.f11[s] : 1.0 - calibration.f00[s];
      if (unit_uniform(rng) < error) outcome ^= mask;
    }
    ++batch.counts[outcome];
  }
  return batch;
}

Eigen::VectorXd apply_confusion(const Eigen::VectorXd& probabilities,
                                const ReadoutCalibration& calibration) {
  calibration.validate();
  const int L = calibration.sites();
  if (probabilities.size() != ipow(2, L)) throw ConfigError("distribution size does not match calibration");
  Eigen::VectorXd q = probabilities;
  for (int s = 0; s < L; ++s) {
    const Eigen::Matrix2d a = calibration.confusion(s);
    const std::int64_t mask = std::int64_t{1} << (L - 1 - s);
    for (std::int64_t k = 0; k < q.size(); ++k) {
      if (k & mask) continue;
      const double p0 = q(k);
      const double p1 = q(k | mask);
      q(k) = a(0, 0) * p0 + a(0, 1) * p1;
      q(k | mask) = a(1, 0) * p0 + a(1, 1) * p1;
    }
  }
  return q;
}

CorrectedMarginals correct_distribution(const Eigen::VectorXd& observed,
                                        const ReadoutCalibration& calibration) {
  calibration.validate();
  const int L = calibration.sites();
  if (observed.size() != ipow(2, L)) throw ConfigError("distribution size does not match calibration");

  // Single-site and pairwise marginals of the observed distribution.
  std::vector<Eigen::Vector2d> single(L, Eigen::Vector2d::Zero());
  std::vector<Eigen::Vector4d> pair(static_cast<std::size_t>(L) * L, Eigen::Vector4d::Zero());
  for (std::int64_t k = 0; k < observed.size(); ++k) {
    const double p = observed(k);
    if (p == 0.0) continue;
    for (int i = 0; i < L; ++i) {
      const int bi = (k >> (L - 1 - i)) & 1;
      single[i](bi) += p;
      for (int j = i + 1; j < L; ++j) {
        const int bj = (k >> (L - 1 - j)) & 1;
        pair[i * L + j](2 * bi + bj) += p;
      }
    }
  }

  CorrectedMarginals out;
  out.site_z.resize(L);
  out.raw_site_z.resize(L);
  out.pair_zz = RealMatrix::Identity(L, L);
  out.raw_pair_zz = RealMatrix::Identity(L, L);
  std::vector<Eigen::Matrix2d> inverse(L);
  for (int i = 0; i < L; ++i) {
    inverse[i] = calibration.confusion(i).inverse();
    const Eigen::Vector2d c = inverse[i] * single[i];
    out.raw_site_z[i] = c(0) - c(1);
    out.site_z[i] = std::clamp(out.raw_site_z[i], -1.0, 1.0);
  }
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) {
      Eigen::Matrix4d joint;
      const Eigen::Matrix2d ai = calibration.confusion(i);
      const Eigen::Matrix2d aj = calibration.confusion(j);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) joint.block<2, 2>(2 * r, 2 * c) = ai(r, c) * aj;
      }
      const Eigen::Vector4d q = joint.inverse() * pair[i * L + j];
      const double zz = q(0) - q(1) - q(2) + q(3);
      out.raw_pair_zz(i, j) = out.raw_pair_zz(j, i) = zz;
      out.pair_zz(i, j) = out.pair_zz(j, i) = std::clamp(zz, -1.0, 1.0);
    }
  }
  return out;
}

CorrectedMarginals correct_marginals(const ShotBatch& batch, const ReadoutCalibration& calibration) {
  if (batch.sites != calibration.sites()) throw ConfigError("calibration size does not match shots");
  return correct_distribution(batch.empirical_distribution(), calibration);
}

std::vector<double> raw_site_z(const ShotBatch& batch) {
  const int L = batch.sites;
  std::vector<double> z(L, 0.0);
  for (std::size_t k = 0; k < batch.counts.size(); ++k) {
    const double w = static_cast<double>(batch.counts[k]) / static_cast<double>(batch.n_shots);
    for (int s = 0; s < L; ++s) z[s] += ((k >> (L - 1 - s)) & 1) ? -w : w;
  }
  return z;
}

}  // namespace floquet
