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

#include "floquet/floquet_driver.hpp"
#include "floquet/observables.hpp"
#include "oracles.hpp"

using namespace floquet;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Schedule, StagesAndTimes) {
  FloquetConfig c = FloquetConfig::with_defaults(3);
  c.t2_disorder = 5.0;
  const FloquetSchedule s = FloquetSchedule::from_config(c);
  ASSERT_EQ(s.stages.size(), 5u);
  EXPECT_EQ(s.stages[4].kind, StageKind::kInteraction);
  EXPECT_DOUBLE_EQ(s.period_ns, 100.0);
  EXPECT_DOUBLE_EQ(s.half_period_time(0), 0.0);
  EXPECT_DOUBLE_EQ(s.half_period_time(1), 45.0);
  EXPECT_DOUBLE_EQ(s.half_period_time(2), 100.0);
  EXPECT_DOUBLE_EQ(s.half_period_time(5), 245.0);
  c.interaction_kind = InteractionKind::kOff;
  EXPECT_EQ(FloquetSchedule::from_config(c).stages.size(), 4u);
}

TEST(PeriodUnitary, TwoPerfectFlipsGiveMinusOne) {
  FloquetConfig c = FloquetConfig::with_defaults(1);
  c.interaction_kind = InteractionKind::kOff;
  const Matrix u = build_period_unitary(c, DisorderRealization::clean(1)).unitary();
  EXPECT_LT(max_diff(u, -Matrix::Identity(2, 2)), 1e-14);
}

TEST(PeriodUnitary, MatchesDenseStageProduct) {
  FloquetConfig c = FloquetConfig::with_defaults(4);
  c.epsilon = 0.04;
  const auto r = DisorderRealization::draw(4, 11);
  const oracle::M flip = oracle::evolve(build_flip_hamiltonian(c).matrix(), c.t1_flip);
  oracle::M hd = oracle::M::Zero(16, 16);
  for (int s = 0; s < 4; ++s) hd += r.phases[s] / 2.0 * oracle::embed(oracle::sz(), s, 4);
  const oracle::M kick = oracle::evolve(hd, 1.0);
  const oracle::M inter = oracle::evolve(build_xx_interaction(c).matrix(), c.t3_int);
  const oracle::M expected = inter * kick * flip * kick * flip;
  EXPECT_LT(max_diff(build_period_unitary(c, r).unitary(), expected), 1e-10);
}

TEST(PeriodUnitary, FiniteDisorderStageUsesSamePhase) {
  FloquetConfig c = FloquetConfig::with_defaults(3);
  c.epsilon = 0.05;
  const auto r = DisorderRealization::draw(3, 2);
  FloquetConfig slow = c;
  slow.t2_disorder = 7.0;
  // Only phi = h t2 matters for the disorder factor.
  EXPECT_LT(max_diff(build_period_unitary(c, r).unitary(), build_period_unitary(slow, r).unitary()), 1e-12);
}

TEST(FlipElimination, IdentityHolds) {
  FloquetConfig c = FloquetConfig::with_defaults(5);
  c.epsilon = 0.17;
  EXPECT_GT(verify_flip_elimination(c, DisorderRealization::draw(5, 3)), 1.0 - 1e-12);
  c.epsilon = -0.1;
  EXPECT_GT(verify_flip_elimination(c, DisorderRealization::draw(5, 4)), 1.0 - 1e-12);
  c.epsilon = 0.0;
  const Matrix u = build_period_unitary(c, DisorderRealization::clean(5)).unitary();
  const Matrix inter = oracle::evolve(build_xx_interaction(c).matrix(), c.t3_int);
  EXPECT_LT(max_diff(u, -inter), 1e-11);
}

TEST(FlipElimination, DetectsWrongFactorization) {
  const Matrix a = Matrix::Identity(4, 4);
  Matrix b = Matrix::Identity(4, 4);
  b(0, 0) = -1.0;
  EXPECT_NEAR(operator_fidelity(a, b), 0.5, 1e-15);
  EXPECT_NEAR(operator_fidelity(a, Complex(0, 1) * a), 1.0, 1e-15);
}

TEST(Stroboscopic, ExactConservationAtZeroEpsilon) {
  for (auto kind : {InteractionKind::kXX, InteractionKind::kIsing, InteractionKind::kOff}) {
    FloquetConfig c = FloquetConfig::with_defaults(5);
    c.interaction_kind = kind;
    const auto rec = run_stroboscopic(c, DisorderRealization::draw(5, 8), StateVector::from_bitstring("01101"), 40);
    const double m0 = rec.points[0].magnetization;
    for (const auto& p : rec.points) {
      const double sign = p.half_period_index % 2 ? -1.0 : 1.0;
      EXPECT_NEAR(sign * p.magnetization, m0, 1e-12);
    }
  }
}

TEST(Stroboscopic, RecordsEveryMark) {
  FloquetConfig c = FloquetConfig::with_defaults(3);
  c.epsilon = 0.1;
  const auto rec = run_stroboscopic(c, DisorderRealization::draw(3, 1), StateVector::ground(3), 7);
  ASSERT_EQ(rec.size(), 8u);
  EXPECT_DOUBLE_EQ(rec.points[3].time_ns, 130.0);
  EXPECT_EQ(rec.complete_period_magnetization().size(), 4u);
  EXPECT_THROW(run_stroboscopic(c, DisorderRealization::draw(3, 1), StateVector::ground(3), 0), ConfigError);
  EXPECT_THROW(run_stroboscopic(c, DisorderRealization::draw(3, 1), StateVector::ground(4), 2), ConfigError);
  // Independent stepping with dense oracle propagators.
  const oracle::M flip = oracle::evolve(build_flip_hamiltonian(c).matrix(), c.t1_flip);
  const auto r = DisorderRealization::draw(3, 1);
  oracle::M hd = oracle::M::Zero(8, 8);
  for (int s = 0; s < 3; ++s) hd += r.phases[s] / 2.0 * oracle::embed(oracle::sz(), s, 3);
  const oracle::M half = oracle::evolve(hd, 1.0) * flip;
  const oracle::M inter = oracle::evolve(build_xx_interaction(c).matrix(), c.t3_int);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = 1.0;
  for (int n = 1; n <= 7; ++n) {
    psi = half * psi;
    if (n % 2 == 0) psi = inter * psi;
    double m = 0.0;
    for (int s = 0; s < 3; ++s) m += (psi.adjoint() * oracle::embed(oracle::sz(), s, 3) * psi)(0).real() / 3.0;
    EXPECT_NEAR(rec.points[n].magnetization, m, 1e-12) << n;
  }
}

TEST(Magnus, FirstOrderClosedForms) {
  FloquetConfig c = FloquetConfig::with_defaults(3);
  const MagnusReport clean = magnus_analysis(c, DisorderRealization::clean(3));
  const Matrix expect = (c.t3_int / c.period()) * build_xx_interaction(c).matrix();
  EXPECT_LT(max_diff(clean.h1.matrix(), expect), 1e-14);

  c.epsilon = 0.05;
  c.interaction_kind = InteractionKind::kOff;
  const MagnusReport off = magnus_analysis(c, DisorderRealization::clean(3));
  oracle::M sx = oracle::M::Zero(8, 8);
  for (int s = 0; s < 3; ++s) sx += oracle::embed(oracle::sx(), s, 3);
  EXPECT_LT(max_diff(off.h1.matrix(), (0.05 * kPi / c.period()) * sx), 1e-14);
  EXPECT_LT(off.h1_minus_closed_form, 1e-14);
  EXPECT_LT(off.h2_norm, 1e-14);  // commuting segments
}

TEST(Magnus, HermitianAndParitySymmetric) {
  FloquetConfig c = FloquetConfig::with_defaults(4);
  c.epsilon = 0.08;
  const MagnusReport rep = magnus_analysis(c, DisorderRealization::clean(4));
  EXPECT_LT(rep.h1.hermiticity_error(), 1e-14);
  EXPECT_LT(rep.h2.hermiticity_error(), 1e-14);
  oracle::M parity = oracle::M::Identity(1, 1);
  for (int s = 0; s < 4; ++s) parity = oracle::kron(parity, oracle::sx());
  EXPECT_LT((rep.h1.matrix() * parity - parity * rep.h1.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Magnus, SecondOrderImprovesOnFirstOrder) {
  FloquetConfig c = scale_durations(FloquetConfig::with_defaults(3), 0.125);
  c.epsilon = 0.1;
  const auto r = DisorderRealization::draw(3, 5);
  const auto segments = toggling_frame_segments(c, r);
  const Matrix exact = toggling_period_unitary(segments).unitary();
  const MagnusReport rep = magnus_analysis(c, r);
  const double T = rep.period_ns;
  const Matrix first = oracle::evolve(rep.h1.matrix(), T);
  const Matrix second = oracle::evolve(rep.h1.matrix() + rep.h2.matrix(), T);
  const double e1 = max_diff(first, exact);
  const double e2 = max_diff(second, exact);
  EXPECT_LT(e2, 0.2 * e1);
  // The toggling-frame product reproduces U(T) up to a global phase.
  EXPECT_GT(operator_fidelity(exact, build_period_unitary(c, r).unitary()), 1.0 - 1e-12);
}

TEST(Magnus, ErrorShrinksWithFasterDrive) {
  FloquetConfig c = FloquetConfig::with_defaults(4);
  c.epsilon = 0.05;
  const auto r = DisorderRealization::draw(4, 21);
  const auto psi = StateVector::ground(4);
  double previous = magnus_stroboscopic_error(c, r, psi, 10);
  for (int k = 1; k <= 3; ++k) {
    const double err = magnus_stroboscopic_error(scale_durations(c, std::ldexp(1.0, -k)), r, psi, 10);
    EXPECT_LT(err, previous) << k;
    previous = err;
  }
}
