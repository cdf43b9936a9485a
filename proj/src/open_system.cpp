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

#include "floquet/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace floquet {

namespace {

// Device table, sites Q01..Q10.
constexpr double kT1Us[] = {82.9, 26.9, 50.1, 37.3, 72.5, 68.4, 24.1, 70.6, 71.0, 36.6};
constexpr double kT2StarUs[] = {0.79, 1.78, 1.08, 1.60, 0.90, 4.16, 0.69, 2.42, 0.79, 2.32};
constexpr int kTableSites = 10;

std::vector<int> basis_digits(int sites, int d) {
  const std::int64_t dim = ipow(d, sites);
  std::vector<int> digits(dim * sites);
  for (std::int64_t k = 0; k < dim; ++k) {
    for (int s = 0; s < sites; ++s) digits[k * sites + s] = site_digit(k, s, sites, d);
  }
  return digits;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix rho, int sites, int local_dim)
    : rho_(std::move(rho)), sites_(sites), local_dim_(local_dim) {
  if (rho_.rows() != rho_.cols() || rho_.rows() != ipow(local_dim, sites)) {
    throw ConfigError("density matrix dimension does not match d^L");
  }
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), psi.sites(), psi.local_dim());
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Eigen::VectorXd DensityMatrix::populations() const { return rho_.diagonal().real(); }

std::vector<double> site_z_expectations(const DensityMatrix& rho) {
  return site_z_from_probabilities(rho.populations(), rho.sites(), rho.local_dim());
}

RealMatrix pair_zz_expectations(const DensityMatrix& rho) {
  return pair_zz_from_probabilities(rho.populations(), rho.sites(), rho.local_dim());
}

RealMatrix level_populations(const DensityMatrix& rho) {
  return level_populations_from_probabilities(rho.populations(), rho.sites(), rho.local_dim());
}

NoiseModel NoiseModel::device_defaults(int sites) {
  if (sites > kTableSites) {
    throw ConfigError("device table covers " + std::to_string(kTableSites) + " sites");
  }
  NoiseModel n;
  n.t1_us.assign(kT1Us, kT1Us + sites);
  n.t2star_us.assign(kT2StarUs, kT2StarUs + sites);
  return n;
}

NoiseModel NoiseModel::noiseless(int sites) {
  NoiseModel n;
  n.t1_us.assign(sites, std::numeric_limits<double>::infinity());
  n.t2star_us.assign(sites, std::numeric_limits<double>::infinity());
  return n;
}

std::vector<double> NoiseModel::relaxation_rates() const {
  std::vector<double> g;
  for (double t1 : t1_us) g.push_back(std::isinf(t1) ? 0.0 : 1.0 / (t1 * 1e3));
  return g;
}

std::vector<double> NoiseModel::dephasing_rates() const {
  const auto relax = relaxation_rates();
  std::vector<double> g;
  for (std::size_t i = 0; i < t2star_us.size(); ++i) {
    const double inv_t2 = std::isinf(t2star_us[i]) ? 0.0 : 1.0 / (t2star_us[i] * 1e3);
    g.push_back(std::max(0.0, inv_t2 - 0.5 * relax[i]));
  }
  return g;
}

bool NoiseModel::is_noiseless() const {
  for (double g : relaxation_rates()) {
    if (g != 0.0) return false;
  }
  for (double g : dephasing_rates()) {
    if (g != 0.0) return false;
  }
  return true;
}

void NoiseModel::validate(int sites) const {
  if (static_cast<int>(t1_us.size()) != sites || static_cast<int>(t2star_us.size()) != sites) {
    throw ConfigError("noise model needs one T1 and one T2* per site");
  }
  for (std::size_t i = 0; i < t1_us.size(); ++i) {
    if (!(t1_us[i] > 0.0) || !(t2star_us[i] > 0.0)) {
      throw ConfigError("T1 and T2* must be positive");
    }
  }
}

LindbladIntegrator::LindbladIntegrator(const HermitianOperator& h, const NoiseModel& noise, double dt)
    : sites_(h.sites()), local_dim_(h.local_dim()), dt_(dt) {
  if (!(dt > 0.0) || dt > kMaxStep) {
    throw ConfigError("Lindblad step must satisfy 0 < dt <= " + std::to_string(kMaxStep) + " ns");
  }
  noise.validate(sites_);
  noiseless_ = noise.is_noiseless();
  u_half_ = make_propagator(h, 0.5 * dt).unitary();
  gamma_relax_ = noise.relaxation_rates();
  gamma_phi_ = noise.dephasing_rates();

  const std::int64_t dim = h.dim();
  digits_ = basis_digits(sites_, local_dim_);
  for (int s = 0; s < sites_; ++s) place_.push_back(ipow(local_dim_, sites_ - 1 - s));
  anticommutator_diag_ = Eigen::VectorXd::Zero(dim);
  for (std::int64_t k = 0; k < dim; ++k) {
    for (int s = 0; s < sites_; ++s) {
      const int n = site_digit(k, s, sites_, local_dim_);
      anticommutator_diag_(k) += gamma_relax_[s] * n + 2.0 * gamma_phi_[s] * n * n;
    }
  }
}

Matrix LindbladIntegrator::dissipator(const Matrix& rho) const {
  const Eigen::Index dim = rho.rows();
  Matrix out(dim, dim);
  if (noiseless_) {
    out.setZero();
    return out;
  }
  const int L = sites_;
  const int d = local_dim_;
  const std::vector<int>& digits = digits_;
  const std::vector<std::int64_t>& place = place_;

  for (Eigen::Index b = 0; b < dim; ++b) {
    const int* nb = &digits[b * L];
    for (Eigen::Index a = 0; a < dim; ++a) {
      const int* na = &digits[a * L];
      double diag_rate = -0.5 * (anticommutator_diag_(a) + anticommutator_diag_(b));
      Complex jump = 0.0;
      for (int s = 0; s < L; ++s) {
        diag_rate += 2.0 * gamma_phi_[s] * na[s] * nb[s];
        // a rho a^dagger with a|n> = sqrt(n)|n-1>: pulls from (n_a + 1, n_b + 1).
        if (gamma_relax_[s] != 0.0 && na[s] < d - 1 && nb[s] < d - 1) {
          jump += gamma_relax_[s] * std::sqrt(static_cast<double>((na[s] + 1) * (nb[s] + 1))) *
                  rho(a + place[s], b + place[s]);
        }
      }
      out(a, b) = diag_rate * rho(a, b) + jump;
    }
  }
  return out;
}

void LindbladIntegrator::conjugate(const Matrix& u, const Matrix& in, Matrix& out) const {
  out.noalias() = u * in * u.adjoint();
}

void LindbladIntegrator::step(DensityMatrix& state) const {
  Matrix& y = state.matrix();
  const double h = dt_;
  Matrix t1, t2;
  if (noiseless_) {
    conjugate(u_half_, y, t1);
    conjugate(u_half_, t1, y);
  } else {
    // Integrating-factor RK4 with E(X) = U_{h/2} X U_{h/2}^dagger.
    const Matrix k1 = dissipator(y);
    Matrix a;
    conjugate(u_half_, y, a);
    conjugate(u_half_, y + (0.5 * h) * k1, t1);
    const Matrix k2 = dissipator(t1);
    const Matrix k3 = dissipator(a + (0.5 * h) * k2);
    conjugate(u_half_, a + h * k3, t1);
    const Matrix k4 = dissipator(t1);
    conjugate(u_half_, y + (h / 6.0) * k1, t1);
    conjugate(u_half_, t1 + (h / 3.0) * (k2 + k3), t2);
    y = t2 + (h / 6.0) * k4;
  }
  y = 0.5 * (y + y.adjoint()).eval();
}

DensityMatrix lindblad_step(const DensityMatrix& rho, const HermitianOperator& h,
                            const NoiseModel& noise, double dt) {
  if (h.dim() != rho.dim()) throw ConfigError("Hamiltonian and density matrix dimensions differ");
  DensityMatrix out = rho;
  LindbladIntegrator(h, noise, dt).step(out);
  return out;
}

int steps_for_stage(double duration_ns, const OpenRunOptions& options) {
  if (duration_ns <= 0.0) return 0;
  if (!(options.max_step_ns > 0.0) || options.max_step_ns > LindbladIntegrator::kMaxStep) {
    throw ConfigError("max_step_ns must be in (0, 0.5]");
  }
  const int by_size = static_cast<int>(std::ceil(duration_ns / options.max_step_ns - 1e-12));
  return std::max({by_size, options.min_steps_per_stage, 1});
}

namespace {

// A protocol stage evolved either unitarily (kick) or through the integrator.
struct OpenStage {
  std::shared_ptr<LindbladIntegrator> integrator;
  int steps = 0;
  Matrix kick;  // used when integrator is null
};

OpenStage make_noisy_stage(const HermitianOperator& h, const NoiseModel& noise, double duration,
                           const OpenRunOptions& options) {
  OpenStage s;
  s.steps = steps_for_stage(duration, options);
  if (s.steps > 0) s.integrator = std::make_shared<LindbladIntegrator>(h, noise, duration / s.steps);
  return s;
}

void run_stage(const OpenStage& stage, DensityMatrix& rho) {
  if (stage.integrator) {
    for (int i = 0; i < stage.steps; ++i) stage.integrator->step(rho);
  } else if (stage.kick.size() != 0) {
    rho.matrix() = stage.kick * rho.matrix() * stage.kick.adjoint();
  }
}

OpenStage make_kick(const HermitianOperator& generator) {
  OpenStage s;
  s.kick = make_propagator(generator, 1.0).unitary();
  return s;
}

void record_open_point(OpenSeriesRecord& out, const DensityMatrix& rho, int n, double t) {
  out.record.points.push_back(make_point(n, t, site_z_expectations(rho), pair_zz_expectations(rho)));
  out.trace.push_back(rho.trace());
  out.min_eigenvalue.push_back(rho.min_eigenvalue());
  out.hermiticity_error.push_back(rho.hermiticity_error());
}

}  // namespace

OpenSeriesRecord run_open_floquet(const FloquetConfig& config,
                                  const DisorderRealization& realization, const NoiseModel& noise,
                                  const DensityMatrix& rho0, int n_half_periods,
                                  const OpenRunOptions& options) {
  config.validate();
  if (config.chain_length > kMaxOpenSystemSites) {
    throw ResourceLimitError("open-system runs are limited to " +
                             std::to_string(kMaxOpenSystemSites) + " sites");
  }
  if (n_half_periods < 1) throw ConfigError("n_half_periods must be at least 1");
  if (rho0.sites() != config.chain_length || rho0.local_dim() != 2) {
    throw ConfigError("initial density matrix does not match the chain");
  }
  realization.validate(config.chain_length);
  noise.validate(config.chain_length);

  const FloquetSchedule schedule = FloquetSchedule::from_config(config);
  const OpenStage flip = make_noisy_stage(build_flip_hamiltonian(config), noise, config.t1_flip, options);
  const HermitianOperator disorder_h = build_disorder_hamiltonian(realization);
  const OpenStage disorder =
      config.t2_disorder > 0.0
          ? make_noisy_stage(disorder_h.scaled(1.0 / config.t2_disorder), noise, config.t2_disorder, options)
          : make_kick(disorder_h);
  OpenStage interaction;
  if (config.interaction_kind != InteractionKind::kOff) {
    interaction = make_noisy_stage(build_interaction(config), noise, config.t3_int, options);
  }

  OpenSeriesRecord out;
  out.record.config_hash = content_hash(canonical_text(config));
  out.record.realization_seed = realization.seed;
  DensityMatrix rho = rho0;
  record_open_point(out, rho, 0, 0.0);
  for (int n = 1; n <= n_half_periods; ++n) {
    run_stage(flip, rho);
    run_stage(disorder, rho);
    if (n % 2 == 0) run_stage(interaction, rho);
    record_open_point(out, rho, n, schedule.half_period_time(n));
  }
  return out;
}

namespace {

struct LeakageStages {
  HermitianOperator flip;
  HermitianOperator kick;
  HermitianOperator interaction;
  bool has_interaction = false;
};

LeakageStages leakage_stages(const FloquetConfig& config, const DisorderRealization& realization) {
  const QutritHamiltonians q = build_qutrit_hamiltonians(config);
  LeakageStages s{build_qutrit_drive(config) + q.anharmonicity, build_qutrit_disorder(realization),
                  q.anharmonicity + q.hopping, config.interaction_kind != InteractionKind::kOff};
  return s;
}

void record_leakage_point(LeakageResult& out, const Eigen::VectorXd& p, int sites, int n, double t,
                          ReadoutMapping mapping) {
  const ReadoutSigns signs{mapping == ReadoutMapping::kDichotomic ? -1.0 : 0.0};
  out.record.points.push_back(make_point(n, t, site_z_from_probabilities(p, sites, 3, signs),
                                         pair_zz_from_probabilities(p, sites, 3, signs)));
  const RealMatrix pops = level_populations_from_probabilities(p, sites, 3);
  out.pop2.push_back(pops.col(2).sum());
  out.total_population.push_back(pops.sum() / sites);
}

}  // namespace

LeakageResult run_leakage(const FloquetConfig& config, const DisorderRealization& realization,
                          const StateVector& psi0, int n_half_periods, const LeakageOptions& options) {
  if (config.chain_length > kMaxQutritSites) {
    throw ResourceLimitError("qutrit runs are limited to " + std::to_string(kMaxQutritSites) + " sites");
  }
  config.validate();
  if (n_half_periods < 1) throw ConfigError("n_half_periods must be at least 1");
  if (psi0.local_dim() != 3 || psi0.sites() != config.chain_length) {
    throw ConfigError("leakage runs need a qutrit initial state of matching length");
  }
  realization.validate(config.chain_length);
  const LeakageStages stages = leakage_stages(config, realization);
  const FloquetSchedule schedule = FloquetSchedule::from_config(config);
  const int L = config.chain_length;

  LeakageResult out;
  out.record.config_hash = content_hash(canonical_text(config));
  out.record.realization_seed = realization.seed;

  if (!options.with_noise) {
    const Propagator flip = make_propagator(stages.flip, config.t1_flip);
    const Propagator kick = make_propagator(stages.kick, 1.0);
    Propagator interaction;
    if (stages.has_interaction) interaction = make_propagator(stages.interaction, config.t3_int);
    StateVector psi = psi0;
    Vector scratch(psi.dim());
    record_leakage_point(out, probabilities(psi), L, 0, 0.0, options.mapping);
    for (int n = 1; n <= n_half_periods; ++n) {
      apply_inplace(flip, psi, scratch);
      apply_inplace(kick, psi, scratch);
      if (n % 2 == 0 && stages.has_interaction) apply_inplace(interaction, psi, scratch);
      record_leakage_point(out, probabilities(psi), L, n, schedule.half_period_time(n), options.mapping);
    }
    return out;
  }

  const OpenStage flip = make_noisy_stage(stages.flip, options.noise, config.t1_flip, options.integrator);
  const OpenStage kick = make_kick(stages.kick);
  OpenStage interaction;
  if (stages.has_interaction) {
    interaction = make_noisy_stage(stages.interaction, options.noise, config.t3_int, options.integrator);
  }
  DensityMatrix rho = DensityMatrix::from_state(psi0);
  record_leakage_point(out, rho.populations(), L, 0, 0.0, options.mapping);
  for (int n = 1; n <= n_half_periods; ++n) {
    run_stage(flip, rho);
    run_stage(kick, rho);
    if (n % 2 == 0) run_stage(interaction, rho);
    record_leakage_point(out, rho.populations(), L, n, schedule.half_period_time(n), options.mapping);
  }
  return out;
}

}  // namespace floquet
