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

#include <algorithm>
#include <cmath>

#include "floquet/hamiltonians.hpp"
#include "floquet/statevector.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

FloquetConfig random_couplings(int L) {
  FloquetConfig c = FloquetConfig::with_defaults(L);
  for (std::size_t i = 0; i < c.j1.size(); ++i) c.j1[i] *= 1.0 + 0.1 * static_cast<double>(i);
  for (std::size_t i = 0; i < c.j2.size(); ++i) c.j2[i] *= 1.0 - 0.05 * static_cast<double>(i);
  return c;
}

}  // namespace

TEST(Config, DefaultsAndPeriod) {
  const FloquetConfig c = FloquetConfig::with_defaults(10);
  EXPECT_EQ(c.j1.size(), 9u);
  EXPECT_EQ(c.j2.size(), 8u);
  EXPECT_NEAR(c.j1[0], 2.0 * kPi * 10.84e-3, 1e-15);
  EXPECT_DOUBLE_EQ(c.period(), 90.0);
  FloquetConfig off = c;
  off.interaction_kind = InteractionKind::kOff;
  EXPECT_DOUBLE_EQ(off.period(), 80.0);
  EXPECT_NEAR(c.rabi_rate() * c.t1_flip, kPi, 1e-15);
}

TEST(Config, ValidationErrors) {
  FloquetConfig c = FloquetConfig::with_defaults(4);
  c.epsilon = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FloquetConfig::with_defaults(4);
  c.j1.pop_back();
  EXPECT_THROW(c.validate(), ConfigError);
  c = FloquetConfig::with_defaults(4);
  c.t1_flip = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FloquetConfig::with_defaults(4);
  c.chain_length = 13;
  EXPECT_THROW(c.validate(), ResourceLimitError);
  EXPECT_THROW(parse_interaction_kind("heisenberg"), ConfigError);
  EXPECT_EQ(parse_interaction_kind("XX"), InteractionKind::kXX);
  EXPECT_EQ(parse_interaction_kind("ising"), InteractionKind::kIsing);
  EXPECT_EQ(parse_interaction_kind("off"), InteractionKind::kOff);
}

TEST(Config, CanonicalTextChangesWithEveryField) {
  const FloquetConfig base = FloquetConfig::with_defaults(4);
  FloquetConfig other = base;
  other.epsilon = 1e-12;
  EXPECT_NE(canonical_text(base), canonical_text(other));
  other = base;
  other.j2[1] += 1e-15;
  EXPECT_NE(canonical_text(base), canonical_text(other));
}

TEST(Disorder, DrawIsReproducibleAndInRange) {
  const auto a = DisorderRealization::draw(10, 42);
  const auto b = DisorderRealization::draw(10, 42);
  const auto c = DisorderRealization::draw(10, 43);
  EXPECT_EQ(a.phases, b.phases);
  EXPECT_NE(a.phases, c.phases);
  for (double p : a.phases) {
    EXPECT_GE(p, -kPi);
    EXPECT_LT(p, kPi);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
  DisorderRealization bad = a;
  bad.phases[0] = kPi;
  EXPECT_THROW(bad.validate(10), ConfigError);
  EXPECT_THROW(a.validate(9), ConfigError);
}

TEST(Disorder, SamplesCoverTheInterval) {
  double lo = 0.0, hi = 0.0, mean = 0.0;
  const int n = 4000;
  for (int s = 0; s < n / 10; ++s) {
    for (double p : DisorderRealization::draw(10, derive_seed(9, s)).phases) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      mean += p / n;
    }
  }
  EXPECT_LT(lo, -3.1);
  EXPECT_GT(hi, 3.1);
  EXPECT_NEAR(mean, 0.0, 0.15);
}

TEST(Hamiltonians, FlipMatchesKroneckerOracle) {
  FloquetConfig c = FloquetConfig::with_defaults(4);
  c.epsilon = 0.07;
  oracle::M expected = oracle::M::Zero(16, 16);
  for (int s = 0; s < 4; ++s) expected += oracle::embed(oracle::sx(), s, 4);
  expected *= (kPi / 40.0) * 1.07 / 2.0;
  EXPECT_LT(max_diff(build_flip_hamiltonian(c).matrix(), expected), 1e-14);
}

TEST(Hamiltonians, XXAndIsingMatchKroneckerOracle) {
  const int L = 5;
  const FloquetConfig c = random_couplings(L);
  oracle::M xx = oracle::M::Zero(32, 32), zz = oracle::M::Zero(32, 32);
  for (int l = 1; l <= 2; ++l) {
    const auto& j = l == 1 ? c.j1 : c.j2;
    for (int i = 0; i + l < L; ++i) {
      xx += j[i] / 2.0 *
            (oracle::embed2(oracle::sx(), i, oracle::sx(), i + l, L) +
             oracle::embed2(oracle::sy(), i, oracle::sy(), i + l, L));
      zz += j[i] / 2.0 * oracle::embed2(oracle::sz(), i, oracle::sz(), i + l, L);
    }
  }
  EXPECT_LT(max_diff(build_xx_interaction(c).matrix(), xx), 1e-15);
  EXPECT_LT(max_diff(build_ising_interaction(c).matrix(), zz), 1e-15);
  FloquetConfig off = c;
  off.interaction_kind = InteractionKind::kOff;
  EXPECT_EQ(build_interaction(off).matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonians, XXConservesExcitationNumber) {
  const FloquetConfig c = random_couplings(4);
  oracle::M sz_total = oracle::M::Zero(16, 16);
  for (int s = 0; s < 4; ++s) sz_total += oracle::embed(oracle::sz(), s, 4);
  const Matrix h = build_xx_interaction(c).matrix();
  EXPECT_LT((h * sz_total - sz_total * h).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonians, SingleSiteDisorderKick) {
  // pi itself is outside [-pi, pi); the largest double below it is used.
  const DisorderRealization r{{std::nextafter(kPi, 0.0)}, 0};
  const Propagator u = make_propagator(build_disorder_hamiltonian(r), 1.0);
  EXPECT_NEAR(std::abs(u.unitary()(0, 0) - std::exp(Complex(0, -kPi / 2))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(u.unitary()(1, 1) - std::exp(Complex(0, kPi / 2))), 0.0, 1e-12);
  const Propagator id = make_propagator(build_disorder_hamiltonian(DisorderRealization::clean(3)), 1.0);
  EXPECT_LT(max_diff(id.unitary(), Matrix::Identity(8, 8)), 1e-15);
}

TEST(Hamiltonians, TwoSiteDisorderMatchesDenseExponential) {
  const DisorderRealization r{{kPi / 2, -kPi / 2}, 0};
  const oracle::M h = (kPi / 2) / 2.0 * oracle::embed(oracle::sz(), 0, 2) -
                      (kPi / 2) / 2.0 * oracle::embed(oracle::sz(), 1, 2);
  const Matrix u = make_propagator(build_disorder_hamiltonian(r), 1.0).unitary();
  EXPECT_LT(max_diff(u, oracle::evolve(h, 1.0)), 1e-13);
  // |00> and |11> pick up no net phase; |01> and |10> pick up e^{-+i pi/2}.
  EXPECT_NEAR(std::abs(u(0, 0) - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(u(1, 1) - Complex(0, -1)), 0.0, 1e-13);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (i != j) {
        EXPECT_EQ(std::abs(u(i, j)), 0.0);
      }
    }
    EXPECT_NEAR(std::abs(u(i, i)), 1.0, 1e-15);
  }
}

TEST(Hamiltonians, RejectsNonHermitianGenerator) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const HermitianOperator op(m, 1, 2);
  EXPECT_THROW(op.spectral(), std::exception);
}

TEST(Hamiltonians, SizeLimit) {
  EXPECT_THROW(FloquetConfig::with_defaults(13).validate(), ResourceLimitError);
  EXPECT_THROW(build_qutrit_hamiltonians(FloquetConfig::with_defaults(6)), ResourceLimitError);
}

TEST(Qutrit, OperatorsMatchBosonicOracle) {
  const int L = 3;
  FloquetConfig c = random_couplings(L);
  c.epsilon = 0.03;
  const oracle::M a = oracle::lower3();
  const oracle::M n = a.adjoint() * a;
  oracle::M p2 = oracle::M::Zero(3, 3);
  p2(2, 2) = 1.0;
  oracle::M x01 = oracle::M::Zero(3, 3);
  x01(0, 1) = x01(1, 0) = 1.0;
  oracle::M anh = oracle::M::Zero(27, 27), hop = anh, drive = anh;
  for (int i = 0; i < L; ++i) {
    anh += c.qutrit_anharmonicity * oracle::embed(p2, i, L);
    drive += (kPi / c.t1_flip) * (1.0 + c.epsilon) / 2.0 * oracle::embed(x01, i, L);
  }
  for (int i = 0; i + 1 < L; ++i) {
    const oracle::M t = oracle::embed2(a, i, a.adjoint(), i + 1, L);
    hop += c.j1[i] * (t + t.adjoint());
  }
  const QutritHamiltonians q = build_qutrit_hamiltonians(c);
  EXPECT_LT(max_diff(q.anharmonicity.matrix(), anh), 1e-15);
  EXPECT_LT(max_diff(q.hopping.matrix(), hop), 1e-15);
  EXPECT_LT(max_diff(build_qutrit_drive(c).matrix(), drive), 1e-15);

  const DisorderRealization r{{0.3, -1.2, 2.5}, 0};
  oracle::M dis = oracle::M::Zero(27, 27);
  for (int i = 0; i < L; ++i) dis += r.phases[i] * oracle::embed(0.5 * oracle::M::Identity(3, 3) - n, i, L);
  EXPECT_LT(max_diff(build_qutrit_disorder(r).matrix(), dis), 1e-15);
}

TEST(Qutrit, TwoExcitationSectorSpectrum) {
  // In the {|02>, |11>, |20>} block the hopping is sqrt(2) J tridiagonal: eigenvalues 0, +-2J.
  FloquetConfig c = FloquetConfig::with_defaults(2);
  const Matrix h = build_qutrit_hamiltonians(c).hopping.matrix();
  const std::vector<int> idx{2, 4, 6};
  Eigen::Matrix3cd block;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) block(i, j) = h(idx[i], idx[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(block);
  const double J = c.j1[0];
  EXPECT_NEAR(es.eigenvalues()(0), -2.0 * J, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), 0.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(2), 2.0 * J, 1e-14);
  EXPECT_NEAR(std::abs(block(0, 1)), std::sqrt(2.0) * J, 1e-15);
}

TEST(Qutrit, DriveRestrictsToQubitFlip) {
  FloquetConfig c = FloquetConfig::with_defaults(1);
  c.epsilon = 0.1;
  const Matrix q = build_qutrit_drive(c).matrix();
  const Matrix b = build_flip_hamiltonian(c).matrix();
  EXPECT_LT(max_diff(q.topLeftCorner(2, 2), b), 1e-15);
  EXPECT_EQ(q.row(2).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(q.col(2).cwiseAbs().maxCoeff(), 0.0);
}
