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

#include "floquet/statevector.hpp"

namespace floquet {

/// Per-qubit assignment fidelities. Confusion matrix of site i is
/// [[f00, 1 - f11], [1 - f00, f11]] (columns: prepared 0, 1).
struct ReadoutCalibration {
  std::vector<double> f00;
  std::vector<double> f11;

  static ReadoutCalibration device_defaults(int sites);
  static ReadoutCalibration perfect(int sites);

  int sites() const { return static_cast<int>(f00.size()); }
  /// Throws ConfigError unless every fidelity is in (0.5, 1].
  void validate() const;
  Eigen::Matrix2d confusion(int site) const;
};

/// Reads "[readout]" f00/f11 lists (fractions or percent) from an INI file.
ReadoutCalibration load_calibration(const std::string& path);

/// Counts per observed bitstring index (site 1 most significant).
struct ShotBatch {
  int sites = 0;
  std::uint64_t n_shots = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> counts;

  Eigen::VectorXd empirical_distribution() const;
};

/// Draws n_shots bitstrings from |psi|^2, then flips each bit with
/// probability 1 - f00 or 1 - f11 according to its true value.
ShotBatch sample_shots(const StateVector& psi, const ReadoutCalibration& calibration,
                       std::uint64_t n_shots, std::uint64_t seed);

/// Exact confusion channel applied to a 2^L probability vector.
Eigen::VectorXd apply_confusion(const Eigen::VectorXd& probabilities,
                                const ReadoutCalibration& calibration);

struct CorrectedMarginals {
  std::vector<double> site_z;      // clipped to [-1, 1]
  RealMatrix pair_zz;              // clipped to [-1, 1], unit diagonal
  std::vector<double> raw_site_z;  // before clipping
  RealMatrix raw_pair_zz;
};

/// Inverts per-qubit (2x2) and per-pair (4x4 tensor) confusion on the
/// marginals of an observed distribution.
CorrectedMarginals correct_distribution(const Eigen::VectorXd& observed,
                                        const ReadoutCalibration& calibration);

CorrectedMarginals correct_marginals(const ShotBatch& batch, const ReadoutCalibration& calibration);

/// Uncorrected empirical <sigma^z_i>.
std::vector<double> raw_site_z(const ShotBatch& batch);

}  // namespace floquet
