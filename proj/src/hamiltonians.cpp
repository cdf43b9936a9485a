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

#include "floquet/hamiltonians.hpp"

#include <cmath>
#include <mutex>
#include <random>
#include <cctype>
#include <cstdio>


namespace floquet {

namespace {

constexpr int kMaxSites = 12;

void check_length(int length, int max_sites) {
  if (length < 1) throw ConfigError("chain length must be at least 1");
  if (length > max_sites) {
    throw ResourceLimitError("chain length " + std::to_string(length) + " exceeds dense limit of " +
                             std::to_string(max_sites));
  }
}

// Applies `fn(index, digits)` over the basis, digits[site] in [0, d).
template <typename Fn>
void for_each_basis_state(int sites, int local_dim, Fn&& fn) {
  const std::int64_t dim = ipow(local_dim, sites);
  std::vector<int> digits(sites, 0);
  for (std::int64_t index = 0; index < dim; ++index) {
    fn(index, digits);
    for (int s = sites - 1; s >= 0; --s) {
      if (++digits[s] < local_dim) break;
      digits[s] = 0;
    }
  }
}

}  // namespace

std::string to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::kXX:
      return "xx";
    case InteractionKind::kIsing:
      return "ising";
    case InteractionKind::kOff:
      return "off";
  }
  return "?";
}

InteractionKind parse_interaction_kind(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "xx" || t == "on") return InteractionKind::kXX;
  if (t == "ising") return InteractionKind::kIsing;
  if (t == "off" || t == "none") return InteractionKind::kOff;
  throw ConfigError("unknown interaction kind '" + text + "' (expected xx, ising or off)");
}

FloquetConfig FloquetConfig::with_defaults(int length) {
  FloquetConfig c;
  c.chain_length = length;
  c.j1.assign(std::max(length - 1, 0), mhz_to_rad_per_ns(kDefaultJ1));
  c.j2.assign(std::max(length - 2, 0), mhz_to_rad_per_ns(kDefaultJ2));
  return c;
}

void FloquetConfig::validate() const {
  check_length(chain_length, kMaxSites);
  if (!std::isfinite(epsilon) || std::abs(epsilon) > 1.0) {
    throw ConfigError("epsilon must be finite with |epsilon| <= 1");
  }
  if (!(t1_flip > 0.0) || !std::isfinite(t1_flip)) throw ConfigError("t1_flip must be positive");
  if (!(t2_disorder >= 0.0) || !std::isfinite(t2_disorder)) {
    throw ConfigError("t2_disorder must be non-negative");
  }
  if (!(t3_int >= 0.0) || !std::isfinite(t3_int)) throw ConfigError("t3_int must be non-negative");
  if (static_cast<int>(j1.size()) != std::max(chain_length - 1, 0)) {
    throw ConfigError("j1 must have L-1 entries");
  }
  if (static_cast<int>(j2.size()) != std::max(chain_length - 2, 0)) {
    throw ConfigError("j2 must have L-2 entries");
  }
  for (double j : j1) {
    if (!std::isfinite(j)) throw ConfigError("j1 entries must be finite");
  }
  for (double j : j2) {
    if (!std::isfinite(j)) throw ConfigError("j2 entries must be finite");
  }
  if (!std::isfinite(qutrit_anharmonicity)) throw ConfigError("anharmonicity must be finite");
}

double FloquetConfig::period() const {
  const double base = 2.0 * t1_flip + 2.0 * t2_disorder;
  return interaction_kind == InteractionKind::kOff ? base : base + t3_int;
}

namespace {

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

}  // namespace

std::string canonical_text(const FloquetConfig& c) {
  std::string out;
  out += "chain_length=" + std::to_string(c.chain_length) + "\n";
  out += "epsilon=" + exact(c.epsilon) + "\n";
  out += "t1_flip=" + exact(c.t1_flip) + "\n";
  out += "t2_disorder=" + exact(c.t2_disorder) + "\n";
  out += "t3_int=" + exact(c.t3_int) + "\n";
  out += "j1=" + exact_list(c.j1) + "\n";
  out += "j2=" + exact_list(c.j2) + "\n";
  out += "interaction=" + to_string(c.interaction_kind) + "\n";
  out += "qutrit_anharmonicity=" + exact(c.qutrit_anharmonicity) + "\n";
  return out;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DisorderRealization DisorderRealization::draw(int length, std::uint64_t seed) {
  check_length(length, kMaxSites);
  std::mt19937_64 rng(seed);
  DisorderRealization r;
  r.seed = seed;
  r.phases.reserve(length);
  for (int i = 0; i < length; ++i) {
    // 53-bit mantissa draw; std::uniform_real_distribution is not portable bit-for-bit.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double phi = -kPi + kTwoPi * u;
    if (phi >= kPi) phi = std::nextafter(kPi, 0.0);
    r.phases.push_back(phi);
  }
  return r;
}

DisorderRealization DisorderRealization::clean(int length) {
  DisorderRealization r;
  r.phases.assign(length, 0.0);
  return r;
}

void DisorderRealization::validate(int length) const {
  if (static_cast<int>(phases.size()) != length) {
    throw ConfigError("disorder realization has " + std::to_string(phases.size()) +
                      " phases, expected " + std::to_string(length));
  }
  for (double phi : phases) {
    if (!(phi >= -kPi && phi < kPi)) throw ConfigError("disorder phase outside [-pi, pi)");
  }
}

struct HermitianOperator::Cache {
  std::once_flag once;
  Spectral spectral;
  std::exception_ptr failure;
};

HermitianOperator::HermitianOperator(Matrix matrix, int sites, int local_dim)
    : matrix_(std::move(matrix)), sites_(sites), local_dim_(local_dim), cache_(std::make_shared<Cache>()) {
  if (matrix_.rows() != matrix_.cols()) throw ConfigError("operator must be square");
  if (matrix_.rows() != ipow(local_dim, sites)) throw ConfigError("operator dimension mismatch");
  const Matrix off = matrix_ - Matrix(matrix_.diagonal().asDiagonal());
  diagonal_ = off.cwiseAbs().maxCoeff() == 0.0;
}

double HermitianOperator::hermiticity_error() const {
  if (matrix_.size() == 0) return 0.0;
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

const HermitianOperator::Spectral& HermitianOperator::spectral() const {
  if (!cache_) throw std::runtime_error("spectral() on an empty operator");
  std::call_once(cache_->once, [this] {
    try {
      const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
      if (hermiticity_error() > 1e-10 * scale) {
        throw std::runtime_error("eigendecomposition rejected: operator is not Hermitian");
      }
      if (diagonal_) {
        cache_->spectral.eigenvalues = matrix_.diagonal().real();
        cache_->spectral.eigenvectors = Matrix::Identity(dim(), dim());
        return;
      }
      Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::ComputeEigenvectors);
      if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed to converge");
      }
      cache_->spectral.eigenvalues = solver.eigenvalues();
      cache_->spectral.eigenvectors = solver.eigenvectors();
    } catch (...) {
      cache_->failure = std::current_exception();
    }
  });
  if (cache_->failure) std::rethrow_exception(cache_->failure);
  return cache_->spectral;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dim() != other.dim() || local_dim_ != other.local_dim_) {
    throw ConfigError("operator sum dimension mismatch");
  }
  return HermitianOperator(matrix_ + other.matrix_, sites_, local_dim_);
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  return HermitianOperator(matrix_ * factor, sites_, local_dim_);
}

HermitianOperator build_flip_hamiltonian(const FloquetConfig& config) {
  config.validate();
  const int L = config.chain_length;
  const std::int64_t dim = ipow(2, L);
  const double amplitude = 0.5 * config.rabi_rate() * (1.0 + config.epsilon);
  Matrix h = Matrix::Zero(dim, dim);
  for (std::int64_t index = 0; index < dim; ++index) {
    for (int site = 0; site < L; ++site) {
      h(index ^ (std::int64_t{1} << (L - 1 - site)), index) += amplitude;
    }
  }
  return HermitianOperator(std::move(h), L, 2);
}

HermitianOperator build_disorder_hamiltonian(const DisorderRealization& realization) {
  const int L = static_cast<int>(realization.phases.size());
  check_length(L, kMaxSites);
  realization.validate(L);
  const std::int64_t dim = ipow(2, L);
  Matrix h = Matrix::Zero(dim, dim);
  for (std::int64_t index = 0; index < dim; ++index) {
    double e = 0.0;
    for (int site = 0; site < L; ++site) {
      const bool excited = (index >> (L - 1 - site)) & 1;
      e += 0.5 * realization.phases[site] * (excited ? -1.0 : 1.0);
    }
    h(index, index) = e;
  }
  return HermitianOperator(std::move(h), L, 2);
}

namespace {

template <typename BondFn>
void for_each_bond(const FloquetConfig& config, BondFn&& fn) {
  const int L = config.chain_length;
  for (int i = 0; i + 1 < L; ++i) fn(i, i + 1, config.j1[i]);
  for (int i = 0; i + 2 < L; ++i) fn(i, i + 2, config.j2[i]);
}

}  // namespace

HermitianOperator build_xx_interaction(const FloquetConfig& config) {
  config.validate();
  const int L = config.chain_length;
  const std::int64_t dim = ipow(2, L);
  Matrix h = Matrix::Zero(dim, dim);
  for_each_bond(config, [&](int a, int b, double j) {
    const std::int64_t ma = std::int64_t{1} << (L - 1 - a);
    const std::int64_t mb = std::int64_t{1} << (L - 1 - b);
    for (std::int64_t index = 0; index < dim; ++index) {
      // (sx sx + sy sy)/2 = s+ s- + s- s+ : swaps 01 <-> 10 with unit amplitude.
      if (((index & ma) != 0) != ((index & mb) != 0)) h(index ^ ma ^ mb, index) += j;
    }
  });
  return HermitianOperator(std::move(h), L, 2);
}

HermitianOperator build_ising_interaction(const FloquetConfig& config) {
  config.validate();
  const int L = config.chain_length;
  const std::int64_t dim = ipow(2, L);
  Matrix h = Matrix::Zero(dim, dim);
  for_each_bond(config, [&](int a, int b, double j) {
    const std::int64_t ma = std::int64_t{1} << (L - 1 - a);
    const std::int64_t mb = std::int64_t{1} << (L - 1 - b);
    for (std::int64_t index = 0; index < dim; ++index) {
      const bool aligned = ((index & ma) != 0) == ((index & mb) != 0);
      h(index, index) += 0.5 * j * (aligned ? 1.0 : -1.0);
    }
  });
  return HermitianOperator(std::move(h), L, 2);
}

HermitianOperator build_interaction(const FloquetConfig& config) {
  switch (config.interaction_kind) {
    case InteractionKind::kXX:
      return build_xx_interaction(config);
    case InteractionKind::kIsing:
      return build_ising_interaction(config);
    case InteractionKind::kOff:
      break;
  }
  config.validate();
  const std::int64_t dim = ipow(2, config.chain_length);
  return HermitianOperator(Matrix::Zero(dim, dim), config.chain_length, 2);
}

namespace {

std::int64_t place_value(int site, int sites, int d) { return ipow(d, sites - 1 - site); }

void check_qutrit_length(int L) {
  if (L < 1) throw ConfigError("chain length must be at least 1");
  if (L > kMaxQutritSites) {
    throw ResourceLimitError("qutrit chain length " + std::to_string(L) + " exceeds limit of " +
                             std::to_string(kMaxQutritSites));
  }
}

}  // namespace

QutritHamiltonians build_qutrit_hamiltonians(const FloquetConfig& config) {
  check_qutrit_length(config.chain_length);
  config.validate();
  const int L = config.chain_length;
  const std::int64_t dim = ipow(3, L);
  Matrix anharm = Matrix::Zero(dim, dim);
  Matrix hop = Matrix::Zero(dim, dim);
  for_each_basis_state(L, 3, [&](std::int64_t index, const std::vector<int>& n) {
    for (int s = 0; s < L; ++s) {
      if (n[s] == 2) anharm(index, index) += config.qutrit_anharmonicity;
    }
    for (int s = 0; s + 1 < L; ++s) {
      // a_s a+_{s+1}: moves one quantum from s to s+1; the adjoint term fills the lower triangle.
      if (n[s] >= 1 && n[s + 1] <= 1) {
        const double amp = std::sqrt(static_cast<double>(n[s])) * std::sqrt(static_cast<double>(n[s + 1] + 1));
        const std::int64_t target = index - place_value(s, L, 3) + place_value(s + 1, L, 3);
        hop(target, index) += config.j1[s] * amp;
        hop(index, target) += config.j1[s] * amp;
      }
    }
  });
  return {HermitianOperator(std::move(anharm), L, 3), HermitianOperator(std::move(hop), L, 3)};
}

HermitianOperator build_qutrit_drive(const FloquetConfig& config) {
  check_qutrit_length(config.chain_length);
  config.validate();
  const int L = config.chain_length;
  const std::int64_t dim = ipow(3, L);
  const double amplitude = 0.5 * config.rabi_rate() * (1.0 + config.epsilon);
  Matrix h = Matrix::Zero(dim, dim);
  for_each_basis_state(L, 3, [&](std::int64_t index, const std::vector<int>& n) {
    for (int s = 0; s < L; ++s) {
      if (n[s] == 0) {
        const std::int64_t up = index + place_value(s, L, 3);
        h(up, index) += amplitude;
        h(index, up) += amplitude;
      }
    }
  });
  return HermitianOperator(std::move(h), L, 3);
}

HermitianOperator build_qutrit_disorder(const DisorderRealization& realization) {
  const int L = static_cast<int>(realization.phases.size());
  check_qutrit_length(L);
  realization.validate(L);
  const std::int64_t dim = ipow(3, L);
  Matrix h = Matrix::Zero(dim, dim);
  for_each_basis_state(L, 3, [&](std::int64_t index, const std::vector<int>& n) {
    double e = 0.0;
    for (int s = 0; s < L; ++s) e += realization.phases[s] * (0.5 - n[s]);
    h(index, index) = e;
  });
  return HermitianOperator(std::move(h), L, 3);
}

}  // namespace floquet
