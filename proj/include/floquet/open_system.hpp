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

#include <vector>

#include "floquet/floquet_driver.hpp"
#include "floquet/hamiltonians.hpp"
#include "floquet/record.hpp"
#include "floquet/statevector.hpp"

namespace floquet {

/// Dense d^L x d^L density matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(Matrix rho, int sites, int local_dim = 2);

  static DensityMatrix from_state(const StateVector& psi);

  const Matrix& matrix() const { return rho_; }
  Matrix& matrix() { return rho_; }
  int sites() const { return sites_; }
  int local_dim() const { return local_dim_; }
  Eigen::Index dim() const { return rho_.rows(); }

  double trace() const { return rho_.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Diagonal as a probability vector.
  Eigen::VectorXd populations() const;

 private:
  Matrix rho_;
  int sites_ = 0;
  int local_dim_ = 2;
};

std::vector<double> site_z_expectations(const DensityMatrix& rho);
RealMatrix pair_zz_expectations(const DensityMatrix& rho);
RealMatrix level_populations(const DensityMatrix& rho);

/// Per-site relaxation and dephasing times (microseconds).
struct NoiseModel {
  std::vector<double> t1_us;
  std::vector<double> t2star_us;

  /// Device table values for the first `sites` qubits.
  static NoiseModel device_defaults(int sites);
  /// No decoherence.
  static NoiseModel noiseless(int sites);

  /// gamma_relax = 1/T1 in 1/ns (0 for infinite T1).
  std::vector<double> relaxation_rates() const;
  /// gamma_phi = max(0, 1/T2* - 1/(2 T1)) in 1/ns.
  std::vector<double> dephasing_rates() const;
  bool is_noiseless() const;
  void validate(int sites) const;
};

/// Fixed-step integrator for d rho/dt = -i[H, rho] + D(rho) with a fixed H.
///
/// The coherent part is integrated exactly through the propagators of H over
/// dt/2 and dt; the dissipator is integrated with classical 4th-order
/// Runge-Kutta in that interaction picture (integrating-factor RK4). With zero
/// rates a step is exactly U rho U^dagger.
class LindbladIntegrator {
 public:
  static constexpr double kMaxStep = 0.5;  // ns

  LindbladIntegrator(const HermitianOperator& h, const NoiseModel& noise, double dt);

  double dt() const { return dt_; }
  /// One step; re-symmetrizes rho to (rho + rho^dagger)/2.
  void step(DensityMatrix& rho) const;
  /// D(rho) with collapse operators sqrt(gamma1) a_i and sqrt(2 gamma_phi) n_i.
  Matrix dissipator(const Matrix& rho) const;

 private:
  void conjugate(const Matrix& u, const Matrix& in, Matrix& out) const;

  int sites_;
  int local_dim_;
  double dt_;
  bool noiseless_;
  Matrix u_half_;
  std::vector<double> gamma_relax_;
  std::vector<double> gamma_phi_;
  Eigen::VectorXd anticommutator_diag_;  // sum_k C_k^dagger C_k (diagonal)
  std::vector<int> digits_;              // digits_[k * L + s]
  std::vector<std::int64_t> place_;
};

/// One integration step. Throws ConfigError if dt <= 0 or dt > 0.5 ns.
DensityMatrix lindblad_step(const DensityMatrix& rho, const HermitianOperator& h,
                            const NoiseModel& noise, double dt);

struct OpenRunOptions {
  double max_step_ns = 0.1;
  int min_steps_per_stage = 10;
};

/// Number of equal steps for a stage: dt = min(max_step, duration / min_steps).
int steps_for_stage(double duration_ns, const OpenRunOptions& options);

inline constexpr int kMaxOpenSystemSites = 6;

struct OpenSeriesRecord {
  TimeSeriesRecord record;
  std::vector<double> trace;
  std::vector<double> min_eigenvalue;
  std::vector<double> hermiticity_error;
};

/// Lindblad evolution through the protocol. Disorder kicks are exact unitary
/// sandwiches; noise acts during the flip and interaction stages.
OpenSeriesRecord run_open_floquet(const FloquetConfig& config,
                                  const DisorderRealization& realization, const NoiseModel& noise,
                                  const DensityMatrix& rho0, int n_half_periods,
                                  const OpenRunOptions& options = {});

enum class ReadoutMapping { kDichotomic, kQubitOnly };

struct LeakageOptions {
  bool with_noise = false;
  NoiseModel noise;
  /// kDichotomic reads |2> as |1>; kQubitOnly reads |2> as neither (z = 0).
  ReadoutMapping mapping = ReadoutMapping::kDichotomic;
  OpenRunOptions integrator;
};

struct LeakageResult {
  TimeSeriesRecord record;
  std::vector<double> pop2;              // sum over sites of P(|2>_i)
  std::vector<double> total_population;  // pop0 + pop1 + pop2 averaged over sites
};

/// Three-level chain through the protocol. Flip stages evolve under the
/// transmon drive plus anharmonicity, the interaction stage under
/// anharmonicity plus bosonic hopping.
LeakageResult run_leakage(const FloquetConfig& config, const DisorderRealization& realization,
                          const StateVector& psi0, int n_half_periods,
                          const LeakageOptions& options = {});

}  // namespace floquet
