#include "hcps/gate_synthesis.hpp"

#include "hcps/io.hpp"

#include <cmath>
#include <stdexcept>

namespace hcps {

std::string to_string(Relabeling r) { return r == Relabeling::kNone ? "none" : "g<->e on both qubits"; }

Operator u1(const SpaceLayout& layout, double zeta, double tau) {
  return embed(expm((kI * (0.5 * zeta * tau)) * CMatrix(pauli::x())), Slot::kSc, layout);
}

Operator u2(const SpaceLayout& layout, double xi, double tau) {
  return embed(expm((kI * (0.5 * xi * tau)) * CMatrix(pauli::x())), Slot::kNv, layout);
}

Operator u3(const SpaceLayout& layout, double A) {
  const HybridOperators ops(layout);
  return {layout, expm((-kI * A) * (ops.sigma_x() * ops.s_x()))};
}

Matrix4c dressed_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  const Eigen::Vector2cd g(r, -r);
  const Eigen::Vector2cd e(r, r);
  Matrix4c w;
  w.col(0) = kron(g, g);
  w.col(1) = kron(g, e);
  w.col(2) = kron(e, g);
  w.col(3) = kron(e, e);
  return w;
}

namespace two_qubit {

Matrix4c sigma_x() { return kron(pauli::identity(), pauli::x()); }
Matrix4c s_x() { return kron(pauli::x(), pauli::identity()); }

Matrix4c phase_gate(double eta) {
  const Matrix4c gen = sigma_x() + s_x() - sigma_x() * s_x();
  return expm((kI * eta) * CMatrix(gen));
}

Matrix4c vacuum_block(const CMatrix& op, const SpaceLayout& layout) {
  Matrix4c out;
  for (int q = 0; q < 4; ++q)
    for (int q2 = 0; q2 < 4; ++q2)
      out(q, q2) = op(layout.index(q / 2, q % 2, 0), layout.index(q2 / 2, q2 % 2, 0));
  return out;
}

Matrix4c relabel(const Matrix4c& u, Relabeling r) {
  if (r == Relabeling::kNone) return u;
  const Matrix4c p = kron(pauli::x(), pauli::x());
  return p * u * p;
}

}  // namespace two_qubit

Matrix4c controlled_phase_target(Complex phase) {
  Matrix4c t = Matrix4c::Identity();
  t(3, 3) = phase;
  return t;
}

Matrix4c ideal_cp_target() { return controlled_phase_target(-1.0); }

double gate_fidelity(const Matrix4c& u, const Matrix4c& v) {
  if (unitarity_defect(u) > 1e-6 || unitarity_defect(v) > 1e-6)
    throw std::invalid_argument("gate fidelity needs unitary inputs");
  const double d = 4.0;
  const double tr = std::abs((v.adjoint() * u).trace());
  return (tr * tr + d) / (d * (d + 1.0));
}

double phase_distance(const Matrix4c& u, const Matrix4c& v) {
  const Complex tr = (v.adjoint() * u).trace();
  const Complex phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : Complex(1.0, 0.0);
  return (u - phase * v).norm();
}

AlignedComparison compare_aligned(const Matrix4c& dressed_u, const Matrix4c& target) {
  AlignedComparison best;
  best.fidelity = -1.0;
  for (Relabeling r : {Relabeling::kNone, Relabeling::kSwapBoth}) {
    const Matrix4c u = two_qubit::relabel(dressed_u, r);
    const double f = gate_fidelity(u, target);
    if (f > best.fidelity + 1e-14) best = {f, phase_distance(u, target), r};
  }
  return best;
}

double nominal_eta(int m) { return kPi / 8.0 + m * kPi / 2.0; }

CalibrationResult calibrate_eta(const Matrix4c& target, int m, const CalibrationSettings& settings) {
  const Matrix4c w = dressed_basis();
  auto score = [&](double eta) { return compare_aligned(w.adjoint() * two_qubit::phase_gate(eta) * w, target); };

  const int n = std::max(8, settings.grid_points);
  const double h = kPi / n;
  int best_k = 0;
  double best_f = -1.0;
  for (int k = 0; k < n; ++k) {
    const double f = score(k * h).fidelity;
    if (f > best_f + 1e-14) {
      best_f = f;
      best_k = k;
    }
  }

  // Golden-section maximization on the bracketing grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best_k - 1) * h, hi = (best_k + 1) * h;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = score(x1).fidelity, f2 = score(x2).fidelity;
  while (hi - lo > settings.tolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = score(x2).fidelity;
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = score(x1).fidelity;
    }
  }
  double eta = 0.5 * (lo + hi);
  if (eta < 0.0) eta += kPi;
  if (eta >= kPi) eta -= kPi;

  CalibrationResult r;
  const AlignedComparison at = score(eta);
  r.eta = eta;
  r.fidelity = at.fidelity;
  r.relabeling = at.relabeling;
  r.eta_paper = nominal_eta(m);
  r.fidelity_nominal = score(r.eta_paper).fidelity;
  return r;
}

double pulse_duration(double rate, double eta) {
  if (rate == 0.0) throw ConditionError("pulse rate is zero; single-qubit phase cannot be accumulated");
  const double period = 2.0 * kTwoPi / std::abs(rate);
  double tau = std::fmod(2.0 * eta / rate, period);
  if (tau <= 0.0) tau += period;
  return tau;
}

namespace {

void check_condition(const char* what, double achieved, double eta, double modulus, double tol) {
  const double off = std::remainder(achieved - eta, modulus);
  if (std::abs(off) > tol)
    throw ConditionError(std::string(what) + " = " + format_double(achieved) + " misses eta = " + format_double(eta) +
                         " by " + format_double(off) + " (modulo " + format_double(modulus) + ")");
}

}  // namespace

GateReport compose_sequence(const PulseSchedule& schedule, const SystemParams& params, const OracleResult& u3_oracle,
                            int fock_cutoff, const Matrix4c& target, const ConditionTolerances& tol) {
  if (!(schedule.tau1 > 0.0 && schedule.tau2 > 0.0 && schedule.t_int > 0.0))
    throw ConditionError("pulse durations and interaction time must be positive");
  const double zeta = params.zeta();
  const double xi = params.xi();
  const double eta = schedule.eta;
  check_condition("zeta tau1 / 2", 0.5 * zeta * schedule.tau1, eta, kTwoPi, tol.phase);
  check_condition("xi tau2 / 2", 0.5 * xi * schedule.tau2, eta, kTwoPi, tol.phase);
  check_condition("A(t_int)", u3_oracle.coeffs.A, eta, kPi, tol.a);

  const SpaceLayout layout(fock_cutoff);
  const Matrix4c x = expm((kI * (0.5 * zeta * schedule.tau1)) * CMatrix(two_qubit::sigma_x()));
  const Matrix4c y = expm((kI * (0.5 * xi * schedule.tau2)) * CMatrix(two_qubit::s_x()));
  const Matrix4c z = two_qubit::vacuum_block(factorized_propagator(u3_oracle.coeffs, layout).matrix(), layout);
  const Matrix4c lab = x * y * z;

  const Matrix4c w = dressed_basis();
  GateReport r;
  r.synthesized = w.adjoint() * lab * w;
  r.target = target;
  r.unitarity_defect = unitarity_defect(r.synthesized);
  r.off_diagonal = max_abs(r.synthesized - Matrix4c(r.synthesized.diagonal().asDiagonal()));
  r.ideal_distance = phase_distance(r.synthesized, w.adjoint() * two_qubit::phase_gate(eta) * w);

  const AlignedComparison cmp = compare_aligned(r.synthesized, target);
  r.fidelity_avg = cmp.fidelity;
  r.phase_distance = cmp.phase_distance;
  r.relabeling = cmp.relabeling;

  for (const CMatrix& block : u3_oracle.sector_blocks)
    r.leakage = std::max(r.leakage, 1.0 - std::norm(block(0, 0)));
  r.leakage = std::max(r.leakage, 0.0);
  r.eta_used = eta;
  r.eta_paper = nominal_eta(schedule.m);
  r.gate_time_ns = schedule.t_int;
  r.factorization_residual = u3_oracle.residual;

  r.diagnostics.push_back("tau1 = " + format_double(schedule.tau1) + " ns, tau2 = " + format_double(schedule.tau2) +
                          " ns, t_int = " + format_double(schedule.t_int) + " ns (n = " + std::to_string(schedule.n) +
                          ", p = " + std::to_string(schedule.p) + ")");
  r.diagnostics.push_back("oracle A(t_int) = " + format_double(u3_oracle.coeffs.A) +
                          ", |B| = " + format_double(std::abs(u3_oracle.coeffs.B)) +
                          ", |C| = " + format_double(std::abs(u3_oracle.coeffs.C)));
  r.diagnostics.push_back("dressed-basis off-diagonal = " + format_double(r.off_diagonal) +
                          ", distance to ideal phase gate = " + format_double(r.ideal_distance));
  return r;
}

GateReport compose_sequence(const PulseSchedule& schedule, const SystemParams& params, int fock_cutoff,
                            const Matrix4c& target, const OracleOptions& oracle, const ConditionTolerances& tol) {
  return compose_sequence(schedule, params, coefficients_oracle(params, schedule.t_int, fock_cutoff, oracle),
                          fock_cutoff, target, tol);
}

}  // namespace hcps
