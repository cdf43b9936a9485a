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

#include "floquet/statevector.hpp"

#include <cmath>

namespace floquet {

StateVector::StateVector(Vector amplitudes, int sites, int local_dim)
    : amplitudes_(std::move(amplitudes)), sites_(sites), local_dim_(local_dim) {
  if (local_dim != 2 && local_dim != 3) throw ConfigError("local dimension must be 2 or 3");
  if (amplitudes_.size() != ipow(local_dim, sites)) {
    throw ConfigError("state length does not match d^L");
  }
}

StateVector StateVector::from_bitstring(std::string_view bits, int local_dim) {
  if (bits.empty()) throw ConfigError("empty bitstring");
  if (bits.size() > 12) throw ResourceLimitError("bitstring longer than 12 sites");
  std::int64_t index = 0;
  for (char c : bits) {
    const int digit = c - '0';
    if (digit < 0 || digit >= local_dim) {
      throw ConfigError(std::string("bad character '") + c + "' in basis string");
    }
    index = index * local_dim + digit;
  }
  const int sites = static_cast<int>(bits.size());
  Vector amps = Vector::Zero(ipow(local_dim, sites));
  amps(index) = 1.0;
  return StateVector(std::move(amps), sites, local_dim);
}

StateVector StateVector::ground(int sites, int local_dim) {
  Vector amps = Vector::Zero(ipow(local_dim, sites));
  amps(0) = 1.0;
  return StateVector(std::move(amps), sites, local_dim);
}

Propagator Propagator::identity(Eigen::Index dim) { return Propagator(Matrix::Identity(dim, dim)); }

double Propagator::unitarity_error() const {
  const Matrix gram = unitary_.adjoint() * unitary_;
  return (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

Propagator Propagator::after(const Propagator& first) const {
  if (dim() != first.dim()) throw ConfigError("propagator composition dimension mismatch");
  return Propagator(unitary_ * first.unitary_, diagonal_ && first.diagonal_);
}

Propagator make_propagator(const HermitianOperator& h, double duration) {
  if (!(duration >= 0.0)) throw ConfigError("propagator duration must be non-negative");
  const auto& spec = h.spectral();
  const Vector phases = (spec.eigenvalues.cast<Complex>() * Complex(0.0, -duration)).array().exp();
  if (h.is_diagonal()) return Propagator(Matrix(phases.asDiagonal()), true);
  return Propagator(spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint());
}

Propagator transverse_rotation(int sites, double angle) {
  if (sites < 1) throw ConfigError("rotation needs at least one site");
  if (sites > 12) throw ResourceLimitError("rotation larger than 12 sites");
  Eigen::Matrix2cd r;
  const Complex c(std::cos(angle / 2.0), 0.0);
  const Complex s(0.0, -std::sin(angle / 2.0));
  r << c, s, s, c;
  Matrix u = Matrix::Ones(1, 1);
  for (int k = 0; k < sites; ++k) {
    Matrix next(u.rows() * 2, u.cols() * 2);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) next.block<2, 2>(2 * i, 2 * j) = u(i, j) * r;
    }
    u = std::move(next);
  }
  return Propagator(std::move(u));
}

StateVector apply(const Propagator& p, const StateVector& psi) {
  if (p.dim() != psi.dim()) throw ConfigError("propagator and state dimensions differ");
  return StateVector(p.unitary() * psi.amplitudes(), psi.sites(), psi.local_dim());
}

void apply_inplace(const Propagator& p, StateVector& psi, Vector& scratch) {
  if (p.dim() != psi.dim()) throw ConfigError("propagator and state dimensions differ");
  if (p.is_diagonal()) {
    psi.amplitudes().array() *= p.unitary().diagonal().array();
    return;
  }
  scratch.noalias() = p.unitary() * psi.amplitudes();
  psi.amplitudes().swap(scratch);
}

int site_digit(Eigen::Index index, int site, int sites, int local_dim) {
  if (local_dim == 2) return static_cast<int>((index >> (sites - 1 - site)) & 1);
  return static_cast<int>((index / ipow(local_dim, sites - 1 - site)) % local_dim);
}

Eigen::VectorXd probabilities(const StateVector& psi) { return psi.amplitudes().cwiseAbs2(); }

std::vector<double> site_z_from_probabilities(const Eigen::VectorXd& p, int sites, int local_dim,
                                              ReadoutSigns signs) {
  std::vector<double> z(sites, 0.0);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) == 0.0) continue;
    for (int s = 0; s < sites; ++s) z[s] += p(k) * signs(site_digit(k, s, sites, local_dim));
  }
  return z;
}

RealMatrix pair_zz_from_probabilities(const Eigen::VectorXd& p, int sites, int local_dim,
                                      ReadoutSigns signs) {
  RealMatrix c = RealMatrix::Zero(sites, sites);
  std::vector<double> sign(sites);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) == 0.0) continue;
    for (int s = 0; s < sites; ++s) sign[s] = signs(site_digit(k, s, sites, local_dim));
    for (int i = 0; i < sites; ++i) {
      const double pi = p(k) * sign[i];
      for (int j = i + 1; j < sites; ++j) c(i, j) += pi * sign[j];
    }
  }
  for (int i = 0; i < sites; ++i) {
    c(i, i) = 1.0;
    for (int j = i + 1; j < sites; ++j) c(j, i) = c(i, j);
  }
  return c;
}

RealMatrix level_populations_from_probabilities(const Eigen::VectorXd& p, int sites, int local_dim) {
  RealMatrix pops = RealMatrix::Zero(sites, local_dim);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    for (int s = 0; s < sites; ++s) pops(s, site_digit(k, s, sites, local_dim)) += p(k);
  }
  return pops;
}

std::vector<double> site_z_expectations(const StateVector& psi) {
  return site_z_from_probabilities(probabilities(psi), psi.sites(), psi.local_dim());
}

RealMatrix pair_zz_expectations(const StateVector& psi) {
  return pair_zz_from_probabilities(probabilities(psi), psi.sites(), psi.local_dim());
}

std::vector<double> excitation_distribution(const StateVector& psi) {
  const int L = psi.sites();
  const int d = psi.local_dim();
  std::vector<double> dist(L * (d - 1) + 1, 0.0);
  const auto& a = psi.amplitudes();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    int n = 0;
    for (int s = 0; s < L; ++s) n += site_digit(k, s, L, d);
    dist[n] += std::norm(a(k));
  }
  return dist;
}

RealMatrix level_populations(const StateVector& psi) {
  return level_populations_from_probabilities(probabilities(psi), psi.sites(), psi.local_dim());
}

}  // namespace floquet
