#include "hcps/gate_synthesis.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace hcps;

namespace {

Matrix4c in_dressed(const Matrix4c& lab) {
  const Matrix4c w = dressed_basis();
  return w.adjoint() * lab * w;
}

double remainder_distance(double x, double period) { return std::abs(std::remainder(x, period)); }

// Oracle output of an exactly disentangled interaction with phase A.
OracleResult exact_oracle(double a, double t) {
  OracleResult o;
  o.coeffs.A = a;
  o.coeffs.t = t;
  for (auto& b : o.sector_blocks) b = CMatrix::Identity(1, 1);
  return o;
}

SystemParams pulse_params() {
  SystemParams p;
  p.E_J0 = 2.2 * kTwoPi;
  p.Omega_mw = 20.0 * kTwoPi;
  p.omega = 1.0;
  return p;
}

}  // namespace

TEST(SingleQubitPulses, U1) {
  const SpaceLayout l(2);
  EXPECT_LT(max_abs(u1(l, 3.0, 0.0).matrix() - CMatrix::Identity(8, 8)), 1e-15);
  const double zeta = 2.0;
  const CMatrix u = u1(l, zeta, kPi / zeta).matrix();  // zeta tau / 2 = pi / 2
  EXPECT_LT(max_abs(u - kI * build_spin_ops(l, Slot::kSc).x.matrix()), 1e-14);
  EXPECT_NEAR(pulse_duration(2.2 * kTwoPi, kPi / 4.0), kPi / (2.0 * 2.2 * kTwoPi), 1e-15);
  EXPECT_NEAR(pulse_duration(2.2 * kTwoPi, kPi / 4.0), 0.1136, 1e-4);
}

TEST(SingleQubitPulses, U2InverseAndNegativeRate) {
  const SpaceLayout l(2);
  const double xi = -20.0 * kTwoPi;
  EXPECT_LT(max_abs((u2(l, xi, 0.013) * u2(l, -xi, 0.013)).matrix() - CMatrix::Identity(8, 8)), 1e-13);
  // Positive duration with xi tau / 2 = eta modulo 2 pi.
  const double eta = kPi / 4.0;
  const double tau = pulse_duration(xi, eta);
  EXPECT_GT(tau, 0.0);
  EXPECT_LT(remainder_distance(0.5 * xi * tau - eta, kTwoPi), 1e-12);
  EXPECT_NEAR(tau, 0.0875, 1e-12);  // 0.1 ns rotation period minus 2 |eta| / |xi|
  EXPECT_THROW(pulse_duration(0.0, eta), ConditionError);
}

TEST(U3, PhasePatternInDressedBasis) {
  const SpaceLayout l(2);
  const Matrix4c d = in_dressed(two_qubit::vacuum_block(u3(l, kPi / 4.0).matrix(), l));
  const Complex m = std::exp(-kI * (kPi / 4.0)), p = std::exp(kI * (kPi / 4.0));
  const Eigen::Vector4cd expected(m, p, p, m);
  EXPECT_LT(max_abs(d - Matrix4c(expected.asDiagonal())), 1e-14);
  EXPECT_LT(max_abs(u3(l, 0.0).matrix() - CMatrix::Identity(8, 8)), 1e-15);
}

TEST(U3, PeriodPiUpToSign) {
  const SpaceLayout l(2);
  const Matrix4c a = two_qubit::vacuum_block(u3(l, 0.37).matrix(), l);
  const Matrix4c b = two_qubit::vacuum_block(u3(l, 0.37 + kPi).matrix(), l);
  EXPECT_LT(max_abs(a + b), 1e-14);
  EXPECT_LT(phase_distance(a, b), 1e-14);
}

TEST(U123, MutuallyCommute) {
  const SpaceLayout l(3);
  const Operator a = u1(l, 1.3, 0.4), b = u2(l, -7.0, 0.02), c = u3(l, 0.61);
  EXPECT_LT(max_abs(commutator(a, b).matrix()), 1e-15);
  EXPECT_LT(max_abs(commutator(a, c).matrix()), 1e-15);
  EXPECT_LT(max_abs(commutator(b, c).matrix()), 1e-15);
}

TEST(DressedBasis, OrthogonalAndDiagonalizing) {
  const Matrix4c w = dressed_basis();
  EXPECT_LT(max_abs(w.imag()), 0.0 + 1e-300);
  EXPECT_LT(max_abs(w.transpose() * w - Matrix4c::Identity()), 1e-15);
  EXPECT_LT(max_abs(in_dressed(two_qubit::s_x()) - Matrix4c(Eigen::Vector4cd(-1, -1, 1, 1).asDiagonal())), 1e-15);
  EXPECT_LT(max_abs(in_dressed(two_qubit::sigma_x()) - Matrix4c(Eigen::Vector4cd(-1, 1, -1, 1).asDiagonal())), 1e-15);
  EXPECT_LT(max_abs(in_dressed(two_qubit::sigma_x() * two_qubit::s_x()) -
                    Matrix4c(Eigen::Vector4cd(1, -1, -1, 1).asDiagonal())),
            1e-15);
}

TEST(PhaseGate, SpectrumIsMinusThreeOneOneOne) {
  for (double eta : {0.1, kPi / 8.0, kPi / 4.0, 1.9}) {
    const Matrix4c d = in_dressed(two_qubit::phase_gate(eta));
    const Eigen::Vector4cd expected(std::exp(-3.0 * kI * eta), std::exp(kI * eta), std::exp(kI * eta),
                                    std::exp(kI * eta));
    EXPECT_LT(max_abs(d - Matrix4c(expected.asDiagonal())), 1e-13) << "eta = " << eta;
    Eigen::ComplexEigenSolver<Matrix4c> es(two_qubit::phase_gate(eta));
    int ones = 0;
    for (int i = 0; i < 4; ++i) ones += std::abs(es.eigenvalues()(i) - std::exp(kI * eta)) < 1e-12;
    EXPECT_EQ(ones, 3);
  }
}

TEST(Fidelity, Examples) {
  const Matrix4c cz = ideal_cp_target();
  EXPECT_NEAR(gate_fidelity(cz, cz), 1.0, 1e-15);
  EXPECT_NEAR(gate_fidelity(cz, Matrix4c::Identity()), 0.4, 1e-15);
  EXPECT_NEAR(gate_fidelity(std::exp(kI * 0.83) * cz, cz), 1.0, 1e-15);
  EXPECT_LT(phase_distance(std::exp(kI * 0.83) * cz, cz), 1e-15);
  EXPECT_NEAR(phase_distance(Matrix4c::Identity(), cz), 2.0, 1e-15);
  Matrix4c bad = Matrix4c::Identity();
  bad(0, 0) = 2.0;
  EXPECT_THROW(gate_fidelity(bad, cz), std::invalid_argument);
}

TEST(Fidelity, BoundedForRandomUnitaries) {
  for (int seed = 0; seed < 20; ++seed) {
    const Matrix4c h = Matrix4c::Random();
    const Matrix4c u = expm(kI * CMatrix(h + h.adjoint()));
    const double f = gate_fidelity(u, ideal_cp_target());
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-15);
  }
}

TEST(Calibrate, ControlledZNeedsQuarterPi) {
  const CalibrationResult c = calibrate_eta(ideal_cp_target());
  EXPECT_LT(remainder_distance(c.eta - kPi / 4.0, kPi / 2.0), 1e-6);
  EXPECT_NEAR(c.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(c.eta_paper, kPi / 8.0, 1e-15);
  EXPECT_NEAR(c.fidelity_nominal, 0.7, 1e-12);  // |Tr| = |3 - i| = sqrt 10
  const Matrix4c w = dressed_basis();
  auto score = [&](double eta) { return compare_aligned(w.adjoint() * two_qubit::phase_gate(eta) * w, ideal_cp_target()).fidelity; };
  EXPECT_LT(score(c.eta + 1e-3), c.fidelity);
  EXPECT_LT(score(c.eta - 1e-3), c.fidelity);
}

TEST(Calibrate, ControlledSNeedsEighthPi) {
  const CalibrationResult c = calibrate_eta(controlled_phase_target(-kI), 1);
  EXPECT_LT(remainder_distance(c.eta - kPi / 8.0, kPi / 2.0), 1e-6);
  EXPECT_NEAR(c.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(c.eta_paper, kPi / 8.0 + kPi / 2.0, 1e-15);
  EXPECT_NEAR(c.fidelity_nominal, 1.0, 1e-12);
}

TEST(Compose, ConditionsMetGiveDiagonalPhaseGate) {
  const SystemParams p = pulse_params();
  for (double eta : {kPi / 8.0, kPi / 4.0, -kPi / 4.0}) {
    PulseSchedule s;
    s.eta = eta;
    s.t_int = kTwoPi;
    s.tau1 = pulse_duration(p.zeta(), eta);
    s.tau2 = pulse_duration(p.xi(), eta);
    const GateReport r = compose_sequence(s, p, exact_oracle(eta, s.t_int), 4, ideal_cp_target());
    EXPECT_LT(r.unitarity_defect, 1e-9);
    EXPECT_LT(r.off_diagonal, 1e-6);
    EXPECT_LT(r.ideal_distance, 1e-9);
    const Complex corner = r.synthesized(0, 0) / r.synthesized(1, 1);
    EXPECT_LT(std::abs(corner - std::exp(-4.0 * kI * eta)), 1e-9) << "eta = " << eta;
  }
}

TEST(Compose, NominalEtaIsControlledMinusI) {
  const SystemParams p = pulse_params();
  PulseSchedule s;
  s.eta = kPi / 8.0;
  s.t_int = kTwoPi;
  s.tau1 = pulse_duration(p.zeta(), s.eta);
  s.tau2 = pulse_duration(p.xi(), s.eta);
  const GateReport r = compose_sequence(s, p, exact_oracle(s.eta, s.t_int), 4, ideal_cp_target());
  EXPECT_GT(r.phase_distance, 0.5);
  EXPECT_NEAR(r.fidelity_avg, 0.7, 1e-9);

  const GateReport cs = compose_sequence(s, p, exact_oracle(s.eta, s.t_int), 4, controlled_phase_target(-kI));
  EXPECT_NEAR(cs.fidelity_avg, 1.0, 1e-12);
  EXPECT_LT(cs.phase_distance, 1e-6);
  EXPECT_EQ(cs.relabeling, Relabeling::kSwapBoth);  // -i sits on |gg>, the target puts it on |ee>
}

TEST(Compose, QuarterPiReachesControlledZ) {
  const SystemParams p = pulse_params();
  PulseSchedule s;
  s.eta = kPi / 4.0;
  s.t_int = kTwoPi;
  s.tau1 = pulse_duration(p.zeta(), s.eta);
  s.tau2 = pulse_duration(p.xi(), s.eta);
  const GateReport r = compose_sequence(s, p, exact_oracle(s.eta + kPi, s.t_int), 4, ideal_cp_target());
  EXPECT_NEAR(r.fidelity_avg, 1.0, 1e-12);
  EXPECT_LT(r.phase_distance, 1e-6);
  EXPECT_EQ(r.leakage, 0.0);
}

TEST(Compose, ViolatedConditionThrows) {
  const SystemParams p = pulse_params();
  PulseSchedule s;
  s.eta = kPi / 4.0;
  s.t_int = kTwoPi;
  s.tau1 = pulse_duration(p.zeta(), s.eta);
  s.tau2 = pulse_duration(p.xi(), s.eta);
  EXPECT_THROW(compose_sequence(s, p, exact_oracle(0.1, s.t_int), 4, ideal_cp_target()), ConditionError);
  s.tau1 *= 1.01;
  EXPECT_THROW(compose_sequence(s, p, exact_oracle(s.eta, s.t_int), 4, ideal_cp_target()), ConditionError);
  s.tau1 = 0.0;
  EXPECT_THROW(compose_sequence(s, p, exact_oracle(s.eta, s.t_int), 4, ideal_cp_target()), ConditionError);
}
