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

#include <gtest/gtest.h>

#include <random>

#include "floquet/hamiltonians.hpp"
#include "floquet/statevector.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

Matrix random_hermitian(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(n(rng), n(rng));
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(StateVector, BitstringOrdering) {
  const StateVector psi = StateVector::from_bitstring("100");
  EXPECT_EQ(psi.dim(), 8);
  EXPECT_EQ(psi.amplitudes()(4), Complex(1.0, 0.0));
  const auto z = site_z_expectations(psi);
  EXPECT_DOUBLE_EQ(z[0], -1.0);
  EXPECT_DOUBLE_EQ(z[1], 1.0);
  EXPECT_THROW(StateVector::from_bitstring("10x"), ConfigError);
  EXPECT_THROW(StateVector::from_bitstring(""), ConfigError);
  EXPECT_EQ(StateVector::from_bitstring("21", 3).amplitudes()(7), Complex(1.0, 0.0));
  EXPECT_EQ(site_digit(7, 0, 2, 3), 2);
}

TEST(Propagator, MatchesTaylorOracle) {
  const Matrix h = random_hermitian(16, 5);
  const HermitianOperator op(h, 4, 2);
  for (double t : {0.0, 0.3, 2.0}) {
    const Matrix u = make_propagator(op, t).unitary();
    EXPECT_LT((u - oracle::evolve(h, t)).cwiseAbs().maxCoeff(), 1e-11) << t;
  }
  EXPECT_THROW(make_propagator(op, -1.0), ConfigError);
  EXPECT_LT(make_propagator(op, 3.0).unitarity_error(), 1e-12);
}

TEST(Propagator, TransverseRotationMatchesFlipExponential) {
  FloquetConfig c = FloquetConfig::with_defaults(4);
  c.epsilon = 0.13;
  const Matrix expected = oracle::evolve(build_flip_hamiltonian(c).matrix(), c.t1_flip);
  EXPECT_LT((transverse_rotation(4, c.rabi_angle()).unitary() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, ApplyAndComposition) {
  const HermitianOperator a(random_hermitian(8, 1), 3, 2);
  const HermitianOperator b(random_hermitian(8, 2), 3, 2);
  const Propagator pa = make_propagator(a, 0.4), pb = make_propagator(b, 0.7);
  StateVector psi = StateVector::from_bitstring("011");
  const StateVector two = apply(pb, apply(pa, psi));
  const StateVector once = apply(pb.after(pa), psi);
  EXPECT_LT((two.amplitudes() - once.amplitudes()).norm(), 1e-13);
  Vector scratch(8);
  apply_inplace(pb.after(pa), psi, scratch);
  EXPECT_LT((psi.amplitudes() - once.amplitudes()).norm(), 1e-13);
  EXPECT_THROW(apply(pa, StateVector::ground(2)), ConfigError);
}

TEST(Observables, ProductStateCorrelators) {
  // |+>|0>: <z1> = 0, <z2> = 1, <z1 z2> = 0.
  Vector amps = Vector::Zero(4);
  amps(0) = amps(2) = 1.0 / std::sqrt(2.0);
  const StateVector psi(amps, 2);
  const auto z = site_z_expectations(psi);
  EXPECT_NEAR(z[0], 0.0, 1e-15);
  EXPECT_NEAR(z[1], 1.0, 1e-15);
  const RealMatrix zz = pair_zz_expectations(psi);
  EXPECT_NEAR(zz(0, 1), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(zz(0, 0), 1.0);
  // Bell state: <z1 z2> = 1 with vanishing single-site values.
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(pair_zz_expectations(StateVector(bell, 2))(1, 0), 1.0, 1e-15);
}

TEST(Observables, ExcitationAndLevels) {
  Vector amps = Vector::Zero(9);
  amps(2) = amps(4) = 1.0 / std::sqrt(2.0);  // |02> and |11>
  const StateVector psi(amps, 2, 3);
  const auto dist = excitation_distribution(psi);
  ASSERT_EQ(dist.size(), 5u);
  EXPECT_NEAR(dist[2], 1.0, 1e-15);
  const RealMatrix levels = level_populations(psi);
  EXPECT_NEAR(levels(1, 2), 0.5, 1e-15);
  EXPECT_NEAR(levels(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(levels(0, 0), 0.5, 1e-15);
  // Dichotomic readout: |2> reads as |1>.
  const auto z = site_z_expectations(psi);
  EXPECT_NEAR(z[1], -1.0, 1e-15);
  EXPECT_NEAR(z[0], 0.0, 1e-15);
}
