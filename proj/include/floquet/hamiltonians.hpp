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
#include <memory>
#include <string>
#include <vector>

#include "floquet/types.hpp"

namespace floquet {

enum class InteractionKind { kXX, kIsing, kOff };

std::string to_string(InteractionKind kind);
InteractionKind parse_interaction_kind(const std::string& text);

/// Protocol parameters. Times are in ns, couplings in rad/ns.
struct FloquetConfig {
  int chain_length = 10;
  double epsilon = 0.0;
  double t1_flip = 40.0;
  double t2_disorder = 0.0;
  double t3_int = 10.0;
  std::vector<double> j1;  // L-1 nearest-neighbour bonds
  std::vector<double> j2;  // L-2 next-nearest-neighbour bonds
  InteractionKind interaction_kind = InteractionKind::kXX;
  double qutrit_anharmonicity = mhz_to_rad_per_ns(-250.0);

  /// Config with the device-average couplings filled in for `length` sites.
  static FloquetConfig with_defaults(int length);

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  /// Target rotation angle of one flip stage, pi(1+eps).
  double rabi_angle() const { return kPi * (1.0 + epsilon); }
  /// Rabi rate g with g*t1 = pi.
  double rabi_rate() const { return kPi / t1_flip; }
  /// T = 2 t1 + 2 t2 + t3 (t3 dropped when the interaction is off).
  double period() const;
  /// Duration of one Flip+Disorder half cycle.
  double half_cycle() const { return t1_flip + t2_disorder; }
};

/// Stable key=value listing of every field, used for content hashing.
std::string canonical_text(const FloquetConfig& config);

inline constexpr double kDefaultJ1 = 10.84;  // MHz
inline constexpr double kDefaultJ2 = 0.28;   // MHz

/// Per-site disorder phases phi_i = h_i t2 in [-pi, pi), with the seed that drew them.
struct DisorderRealization {
  std::vector<double> phases;
  std::uint64_t seed = 0;

  /// Draws L phases uniformly from [-pi, pi). Bit-exact for a given seed.
  static DisorderRealization draw(int length, std::uint64_t seed);
  /// All-zero phases (clean chain).
  static DisorderRealization clean(int length);

  void validate(int length) const;
};

/// Seed for realization `index` under a master seed (splitmix64 of a counter).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Dense Hermitian operator on d^L states, site 1 = most significant digit.
///
/// The spectral decomposition is computed lazily and shared between copies,
/// so a propagator for a new duration costs one reconstruction.
class HermitianOperator {
 public:
  struct Spectral {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
  };

  HermitianOperator() = default;
  HermitianOperator(Matrix matrix, int sites, int local_dim);

  const Matrix& matrix() const { return matrix_; }
  int sites() const { return sites_; }
  int local_dim() const { return local_dim_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  bool is_diagonal() const { return diagonal_; }

  /// max |A - A^dagger|.
  double hermiticity_error() const;

  /// Cached eigendecomposition. Throws std::runtime_error if it fails.
  const Spectral& spectral() const;

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator scaled(double factor) const;

 private:
  struct Cache;
  Matrix matrix_;
  int sites_ = 0;
  int local_dim_ = 2;
  bool diagonal_ = false;
  std::shared_ptr<Cache> cache_;
};

/// g(1+eps) sum_i sigma^x_i / 2 with g = pi / t1.
HermitianOperator build_flip_hamiltonian(const FloquetConfig& config);

/// sum_i phi_i sigma^z_i / 2 as a generator for unit evolution parameter.
///
/// With a zero-duration disorder stage this is the kick generator; the stage
/// propagator is exp(-i H). For t2 > 0 divide by t2 to get h_i.
HermitianOperator build_disorder_hamiltonian(const DisorderRealization& realization);

/// sum_{l=1,2} sum_i J^(l)_i (sx_i sx_{i+l} + sy_i sy_{i+l}) / 2.
HermitianOperator build_xx_interaction(const FloquetConfig& config);

/// sum_{l=1,2} sum_i J^(l)_i sz_i sz_{i+l} / 2.
HermitianOperator build_ising_interaction(const FloquetConfig& config);

/// Interaction selected by config.interaction_kind (zero matrix for kOff).
HermitianOperator build_interaction(const FloquetConfig& config);

inline constexpr int kMaxQutritSites = 5;

struct QutritHamiltonians {
  HermitianOperator anharmonicity;  // sum_i eta |2><2|_i
  HermitianOperator hopping;        // sum_i J1_i (a_i a+_{i+1} + h.c.)
};

/// Three-level chain operators with bosonic matrix elements (<1|a|2> = sqrt 2).
QutritHamiltonians build_qutrit_hamiltonians(const FloquetConfig& config);

/// Flip drive g(1+eps) sigma^x_i / 2 acting on {0,1} of each site; |2> is left
/// idle (leakage-free pulse).
HermitianOperator build_qutrit_drive(const FloquetConfig& config);

/// Three-level virtual-Z kick: phase phi_i (1/2 - n_i) per site.
HermitianOperator build_qutrit_disorder(const DisorderRealization& realization);

}  // namespace floquet
