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

#include "floquet/floquet_driver.hpp"

#include <cmath>

namespace floquet {

FloquetSchedule FloquetSchedule::from_config(const FloquetConfig& config) {
  config.validate();
  FloquetSchedule s;
  s.period_ns = config.period();
  s.half_cycle_ns = config.half_cycle();
  s.stages = {{StageKind::kFlip, config.t1_flip},
              {StageKind::kDisorder, config.t2_disorder},
              {StageKind::kFlip, config.t1_flip},
              {StageKind::kDisorder, config.t2_disorder}};
  if (config.interaction_kind != InteractionKind::kOff) {
    s.stages.push_back({StageKind::kInteraction, config.t3_int});
  }
  return s;
}

double FloquetSchedule::half_period_time(int n) const {
  const int complete = n / 2;
  return half_cycle_ns * (n - 2 * complete) + period_ns * complete;
}

StagePropagators StagePropagators::build(const FloquetConfig& config,
                                         const DisorderRealization& realization) {
  config.validate();
  StagePropagators s;
  s.sites = config.chain_length;
  s.flip = std::make_shared<const Propagator>(
      transverse_rotation(config.chain_length, config.rabi_angle()));
  if (config.interaction_kind != InteractionKind::kOff) {
    s.interaction = std::make_shared<const Propagator>(
        make_propagator(build_interaction(config), config.t3_int));
  }
  return s.with_disorder(realization);
}

StagePropagators StagePropagators::with_disorder(const DisorderRealization& realization) const {
  realization.validate(sites);
  StagePropagators s = *this;
  // phi_i = h_i t2 is the only physical parameter, so the stage is exp(-i H_D)
  // whether it takes zero time (virtual Z) or t2 > 0.
  s.disorder = make_propagator(build_disorder_hamiltonian(realization), 1.0);
  return s;
}

Propagator StagePropagators::half_cycle() const { return disorder.after(*flip); }

Propagator StagePropagators::period() const {
  const Propagator half = half_cycle();
  Propagator u = half.after(half);
  if (interaction) u = interaction->after(u);
  return u;
}

Propagator build_period_unitary(const FloquetConfig& config, const DisorderRealization& realization) {
  return StagePropagators::build(config, realization).period();
}

double operator_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ConfigError("fidelity dimension mismatch");
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

namespace {

// exp(-i eps pi sum sigma^x / 2): the flip Hamiltonian at eps = 0 run for eps * t1.
Propagator perturbation_rotation(const FloquetConfig& config) {
  FloquetConfig clean = config;
  clean.epsilon = 0.0;
  return make_propagator(build_flip_hamiltonian(clean), std::abs(config.epsilon) * config.t1_flip);
}

HermitianOperator perturbation_generator(const FloquetConfig& config) {
  FloquetConfig clean = config;
  clean.epsilon = 0.0;
  // (pi / t1) S_x / 2 scaled by eps gives eps pi S_x / (2 t1) over t1.
  return build_flip_hamiltonian(clean).scaled(config.epsilon);
}

}  // namespace

double verify_flip_elimination(const FloquetConfig& config, const DisorderRealization& realization) {
  const StagePropagators stages = StagePropagators::build(config, realization);
  const Matrix protocol = stages.period().unitary();

  Propagator rotation = perturbation_rotation(config);
  if (config.epsilon < 0.0) rotation = Propagator(rotation.unitary().adjoint());
  const Matrix& z = stages.disorder.unitary();
  Matrix eliminated = z * rotation.unitary() * z.adjoint() * rotation.unitary();
  if (stages.interaction) eliminated = stages.interaction->unitary() * eliminated;
  if (config.chain_length % 2) eliminated = -eliminated;
  return operator_fidelity(protocol, eliminated);
}

TimeSeriesRecord run_stroboscopic(const FloquetConfig& config,
                                  const DisorderRealization& realization,
                                  const StateVector& psi0, int n_half_periods) {
  return run_stroboscopic(config, StagePropagators::build(config, realization), psi0, n_half_periods);
}

namespace {

ObservablePoint observe(const StateVector& psi, int n, double t) {
  return make_point(n, t, site_z_expectations(psi), pair_zz_expectations(psi));
}

}  // namespace

TimeSeriesRecord run_stroboscopic(const FloquetConfig& config, const StagePropagators& stages,
                                  const StateVector& psi0, int n_half_periods) {
  if (n_half_periods < 1) throw ConfigError("n_half_periods must be at least 1");
  if (psi0.sites() != config.chain_length || psi0.local_dim() != 2) {
    throw ConfigError("initial state does not match the chain length");
  }
  const FloquetSchedule schedule = FloquetSchedule::from_config(config);
  TimeSeriesRecord record;
  record.config_hash = content_hash(canonical_text(config));
  record.points.reserve(n_half_periods + 1);

  StateVector state = psi0;
  Vector scratch(state.dim());
  record.points.push_back(observe(state, 0, 0.0));
  for (int n = 1; n <= n_half_periods; ++n) {
    // Odd marks sit one Flip+Disorder cycle into the period, even marks close it.
    apply_inplace(*stages.flip, state, scratch);
    apply_inplace(stages.disorder, state, scratch);
    if (n % 2 == 0 && stages.interaction) apply_inplace(*stages.interaction, state, scratch);
    record.points.push_back(observe(state, n, schedule.half_period_time(n)));
  }
  return record;
}

std::vector<ToggleSegment> toggling_frame_segments(const FloquetConfig& config,
                                                   const DisorderRealization& realization) {
  config.validate();
  realization.validate(config.chain_length);
  const HermitianOperator perturbation = perturbation_generator(config);
  const HermitianOperator disorder = build_disorder_hamiltonian(realization);
  std::vector<ToggleSegment> segments;
  segments.push_back({perturbation, config.t1_flip});
  if (config.t2_disorder > 0.0) {
    const HermitianOperator h = disorder.scaled(1.0 / config.t2_disorder);
    segments.push_back({h.scaled(-1.0), config.t2_disorder});
    segments.push_back({perturbation, config.t1_flip});
    segments.push_back({h, config.t2_disorder});
  } else {
    const Matrix z = make_propagator(disorder, 1.0).unitary();
    Matrix rotated = z * perturbation.matrix() * z.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    segments.push_back({HermitianOperator(std::move(rotated), config.chain_length, 2), config.t1_flip});
  }
  if (config.interaction_kind != InteractionKind::kOff) {
    segments.push_back({build_interaction(config), config.t3_int});
  }
  return segments;
}

Propagator toggling_period_unitary(const std::vector<ToggleSegment>& segments) {
  if (segments.empty()) throw ConfigError("no toggling-frame segments");
  Propagator u = Propagator::identity(segments.front().hamiltonian.dim());
  for (const auto& seg : segments) u = make_propagator(seg.hamiltonian, seg.duration_ns).after(u);
  return u;
}

MagnusReport magnus_analysis(const FloquetConfig& config, const DisorderRealization& realization) {
  const auto segments = toggling_frame_segments(config, realization);
  double period = 0.0;
  for (const auto& s : segments) period += s.duration_ns;
  const Eigen::Index dim = segments.front().hamiltonian.dim();
  const int L = config.chain_length;

  Matrix h1 = Matrix::Zero(dim, dim);
  for (const auto& s : segments) h1 += s.duration_ns * s.hamiltonian.matrix();
  h1 /= period;

  // Piecewise-constant double integral: only ordered pairs of distinct segments contribute.
  Matrix h2 = Matrix::Zero(dim, dim);
  for (std::size_t later = 1; later < segments.size(); ++later) {
    const Matrix& a = segments[later].hamiltonian.matrix();
    for (std::size_t earlier = 0; earlier < later; ++earlier) {
      const Matrix& b = segments[earlier].hamiltonian.matrix();
      h2 += (segments[later].duration_ns * segments[earlier].duration_ns) * (a * b - b * a);
    }
  }
  h2 *= Complex(0.0, -1.0 / (2.0 * period));
  h2 = 0.5 * (h2 + h2.adjoint()).eval();

  FloquetConfig clean = config;
  clean.epsilon = 0.0;
  Matrix closed = build_flip_hamiltonian(clean).matrix() * (config.epsilon * config.t1_flip * 2.0 / period);
  if (config.interaction_kind != InteractionKind::kOff) {
    closed += (config.t3_int / period) * build_interaction(config).matrix();
  }

  MagnusReport report{HermitianOperator(h1, L, 2), HermitianOperator(h2, L, 2),
                      HermitianOperator(closed, L, 2), period, 0.0, 0.0};
  report.h1_minus_closed_form = (h1 - closed).cwiseAbs().maxCoeff();
  report.h2_norm = h2.cwiseAbs().maxCoeff();
  return report;
}

double magnus_stroboscopic_error(const FloquetConfig& config,
                                 const DisorderRealization& realization,
                                 const StateVector& psi0, int n_periods) {
  const auto segments = toggling_frame_segments(config, realization);
  const Propagator exact = toggling_period_unitary(segments);
  const MagnusReport report = magnus_analysis(config, realization);
  const Propagator effective = make_propagator(report.h1 + report.h2, report.period_ns);
  Vector a = psi0.amplitudes();
  Vector b = psi0.amplitudes();
  for (int n = 0; n < n_periods; ++n) {
    a = exact.unitary() * a;
    b = effective.unitary() * b;
  }
  const double overlap = std::norm(a.dot(b));
  return std::sqrt(std::max(0.0, 1.0 - overlap));
}

FloquetConfig scale_durations(const FloquetConfig& config, double factor) {
  FloquetConfig c = config;
  c.t1_flip *= factor;
  c.t2_disorder *= factor;
  c.t3_int *= factor;
  return c;
}

}  // namespace floquet
