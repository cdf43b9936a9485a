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

#include <memory>
#include <vector>

#include "floquet/hamiltonians.hpp"
#include "floquet/record.hpp"
#include "floquet/statevector.hpp"

namespace floquet {

enum class StageKind { kFlip, kDisorder, kInteraction };

struct Stage {
  StageKind kind;
  double duration_ns;
};

/// Stage order and measurement times of one Floquet period.
struct FloquetSchedule {
  double period_ns = 0.0;
  double half_cycle_ns = 0.0;
  std::vector<Stage> stages;

  static FloquetSchedule from_config(const FloquetConfig& config);

  /// t(n) = (t1 + t2)(n mod 2) + T floor(n / 2).
  double half_period_time(int half_period_index) const;
};

/// The three distinct stage propagators of one period, built once per
/// (config, realization). Flip and interaction factors depend only on the
/// config and are shared read-only between realizations.
struct StagePropagators {
  std::shared_ptr<const Propagator> flip;
  Propagator disorder;
  std::shared_ptr<const Propagator> interaction;  // null when the interaction is off
  int sites = 0;

  static StagePropagators build(const FloquetConfig& config,
                                const DisorderRealization& realization);

  /// Same flip/interaction factors with a different disorder kick.
  StagePropagators with_disorder(const DisorderRealization& realization) const;

  /// Disorder after flip.
  Propagator half_cycle() const;
  /// e^{-iH_Int t3} (Z X_eps)^2.
  Propagator period() const;
};

/// Exact single-period unitary in protocol order.
Propagator build_period_unitary(const FloquetConfig& config, const DisorderRealization& realization);

/// Phase-insensitive fidelity |Tr(A^dagger B)| / d^L.
double operator_fidelity(const Matrix& a, const Matrix& b);

/// Fidelity between the protocol product and the form with the pi flips
/// eliminated, (-1)^L e^{-iH_Int t3} Z e^{-i eps pi S_x/2} Z^dagger e^{-i eps pi S_x/2}.
double verify_flip_elimination(const FloquetConfig& config, const DisorderRealization& realization);

/// Evolves psi0 and records observables at every half-period mark 0..n_half_periods.
TimeSeriesRecord run_stroboscopic(const FloquetConfig& config,
                                  const DisorderRealization& realization,
                                  const StateVector& psi0, int n_half_periods);

/// Variant reusing already-built stage propagators.
TimeSeriesRecord run_stroboscopic(const FloquetConfig& config, const StagePropagators& stages,
                                  const StateVector& psi0, int n_half_periods);

/// A piecewise-constant segment of the toggling-frame Hamiltonian.
struct ToggleSegment {
  HermitianOperator hamiltonian;
  double duration_ns;
};

/// Toggling-frame segments in time order.
///
/// The pi flips are removed exactly and each zero-duration disorder kick is
/// absorbed by conjugating the flip perturbation that precedes it, so the
/// perturbation of the second flip appears along the axis (cos phi_i, sin phi_i).
/// For t2 > 0 the disorder stage is kept as a real segment of length t2.
std::vector<ToggleSegment> toggling_frame_segments(const FloquetConfig& config,
                                                   const DisorderRealization& realization);

/// Product of the toggling-frame segment exponentials (equals U(T) up to (-1)^L).
Propagator toggling_period_unitary(const std::vector<ToggleSegment>& segments);

struct MagnusReport {
  HermitianOperator h1;
  HermitianOperator h2;
  HermitianOperator closed_form;  // (t3/T) H_Int + (eps pi / T) sum sigma^x
  double period_ns = 0.0;
  double h1_minus_closed_form = 0.0;  // max-element norm
  double h2_norm = 0.0;               // max-element norm
};

MagnusReport magnus_analysis(const FloquetConfig& config, const DisorderRealization& realization);

/// Trace distance between exp(-i(H1+H2)T)^n psi0 and U_toggle^n psi0.
double magnus_stroboscopic_error(const FloquetConfig& config,
                                 const DisorderRealization& realization,
                                 const StateVector& psi0, int n_periods);

/// Same config with every stage duration multiplied by `factor`.
FloquetConfig scale_durations(const FloquetConfig& config, double factor);

}  // namespace floquet
