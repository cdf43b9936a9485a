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

#include <string_view>
#include <vector>

#include "floquet/hamiltonians.hpp"
#include "floquet/types.hpp"

namespace floquet {

/// Pure state over d^L basis states.
class StateVector {
 public:
  StateVector() = default;
  StateVector(Vector amplitudes, int sites, int local_dim = 2);

  /// Computational basis state; the leftmost character is site 1.
  static StateVector from_bitstring(std::string_view bits, int local_dim = 2);
  /// |0...0>.
  static StateVector ground(int sites, int local_dim = 2);

  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }
  int sites() const { return sites_; }
  int local_dim() const { return local_dim_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  double norm() const { return amplitudes_.norm(); }

 private:
  Vector amplitudes_;
  int sites_ = 0;
  int local_dim_ = 2;
};

/// U = exp(-i H t) for a Hermitian generator.
class Propagator {
 public:
  Propagator() = default;
  explicit Propagator(Matrix unitary, bool diagonal = false)
      : unitary_(std::move(unitary)), diagonal_(diagonal) {}

  static Propagator identity(Eigen::Index dim);

  const Matrix& unitary() const { return unitary_; }
  Eigen::Index dim() const { return unitary_.rows(); }
  bool is_diagonal() const { return diagonal_; }

  /// max |U^dagger U - I|.
  double unitarity_error() const;

  /// Composition: (*this) applied after `first`.
  Propagator after(const Propagator& first) const;

 private:
  Matrix unitary_;
  bool diagonal_ = false;
};

/// exp(-i H duration) from the cached eigendecomposition of `h`.
Propagator make_propagator(const HermitianOperator& h, double duration);

/// prod_i exp(-i angle sigma^x_i / 2) assembled as a Kronecker product of 2x2 factors.
Propagator transverse_rotation(int sites, double angle);

/// U psi. Throws ConfigError on dimension mismatch.
StateVector apply(const Propagator& p, const StateVector& psi);
/// In-place variant used by the hot loops; `scratch` avoids reallocation.
void apply_inplace(const Propagator& p, StateVector& psi, Vector& scratch);

/// Digit of `site` (0-based, site 0 most significant) in basis index `index`.
int site_digit(Eigen::Index index, int site, int sites, int local_dim);

/// Signed readout value of one level: +1 for |0>, -1 for |1>; |2> reads as
/// `level2_value` (-1 for dichotomic readout).
struct ReadoutSigns {
  double level2_value = -1.0;
  double operator()(int digit) const { return digit == 0 ? 1.0 : (digit == 1 ? -1.0 : level2_value); }
};

/// Marginal observables of a basis-state probability vector.
std::vector<double> site_z_from_probabilities(const Eigen::VectorXd& p, int sites, int local_dim,
                                              ReadoutSigns signs = {});
RealMatrix pair_zz_from_probabilities(const Eigen::VectorXd& p, int sites, int local_dim,
                                      ReadoutSigns signs = {});
RealMatrix level_populations_from_probabilities(const Eigen::VectorXd& p, int sites, int local_dim);

/// |amplitude|^2.
Eigen::VectorXd probabilities(const StateVector& psi);

/// <sigma^z_i>. For qutrits |2> is read out as |1> (dichotomic readout).
std::vector<double> site_z_expectations(const StateVector& psi);

/// <sigma^z_i sigma^z_j>, symmetric with unit diagonal.
RealMatrix pair_zz_expectations(const StateVector& psi);

/// Probability of each total excitation number 0..L(d-1).
std::vector<double> excitation_distribution(const StateVector& psi);

/// Per-site level populations, shape L x d.
RealMatrix level_populations(const StateVector& psi);

}  // namespace floquet
