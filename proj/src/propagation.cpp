#include "hcps/propagation.hpp"

#include "hcps/io.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hcps {

void PropagationSettings::validate() const {
  if (!(t1 > t0)) throw std::invalid_argument("propagation requires t1 > t0");
  if (steps < 1) throw std::invalid_argument("propagation requires steps >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("propagation requires tolerance > 0");
  if (max_refinements < 0) throw std::invalid_argument("propagation requires max_refinements >= 0");
}

namespace {

CMatrix sample(const HamiltonianFn& h, double t) {
  CMatrix m = h(t);
  if (!m.allFinite()) throw NumericalError("non-finite Hamiltonian sample at t = " + format_double(t));
  const double scale = std::max(1.0, max_abs(m));
  if (hermiticity_defect(m) > 1e-10 * scale)
    throw NumericalError("non-Hermitian Hamiltonian sample at t = " + format_double(t));
  return m;
}

// Gauss-Legendre nodes and weights of the commutator-free fourth-order scheme.
const double kGaussOffset = std::sqrt(3.0) / 6.0;
const double kAlpha1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double kAlpha2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

}  // namespace

CMatrix step_propagator(const HamiltonianFn& h, double t, double dt, Integrator integrator) {
  if (integrator == Integrator::kMidpoint) return expm((-kI * dt) * sample(h, t + 0.5 * dt));
  const CMatrix h1 = sample(h, t + (0.5 - kGaussOffset) * dt);
  const CMatrix h2 = sample(h, t + (0.5 + kGaussOffset) * dt);
  // The right factor acts first and leans on the earlier node.
  const CMatrix first = expm((-kI * dt) * (kAlpha2 * h1 + kAlpha1 * h2));
  const CMatrix second = expm((-kI * dt) * (kAlpha1 * h1 + kAlpha2 * h2));
  return second * first;
}

namespace {

CMatrix product_propagator(const HamiltonianFn& h, const PropagationSettings& s, int steps) {
  const double dt = (s.t1 - s.t0) / steps;
  CMatrix u;
  for (int k = 0; k < steps; ++k) {
    const CMatrix step = step_propagator(h, s.t0 + k * dt, dt, s.integrator);
    u = k == 0 ? step : CMatrix(step * u);
  }
  return u;
}

CVector product_state(const HamiltonianFn& h, const CVector& psi0, const PropagationSettings& s, int steps,
                      int stride, std::vector<TrajectorySample>* trajectory) {
  const double dt = (s.t1 - s.t0) / steps;
  CVector psi = psi0;
  if (trajectory) trajectory->push_back({s.t0, psi});
  for (int k = 0; k < steps; ++k) {
    psi = step_propagator(h, s.t0 + k * dt, dt, s.integrator) * psi;
    if (trajectory && ((k + 1) % stride == 0 || k + 1 == steps)) trajectory->push_back({s.t0 + (k + 1) * dt, psi});
  }
  return psi;
}

}  // namespace

PropagatorResult evolve_propagator(const HamiltonianFn& h, const PropagationSettings& settings) {
  settings.validate();
  PropagatorResult r;
  int steps = settings.steps;
  CMatrix previous = product_propagator(h, settings, steps);
  for (int i = 0; i < settings.max_refinements; ++i) {
    steps *= 2;
    CMatrix current = product_propagator(h, settings, steps);
    r.last_change = max_abs(current - previous);
    previous = std::move(current);
    if (r.last_change < settings.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.unitary = std::move(previous);
  r.steps_used = steps;
  r.unitarity_defect = unitarity_defect(r.unitary);
  if (r.unitarity_defect >= 1e-9) r.converged = false;
  return r;
}

StateResult evolve_state(const HamiltonianFn& h, const CVector& psi0, const PropagationSettings& settings,
                         int stride) {
  settings.validate();
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial state is not normalized");
  StateResult r;
  int steps = settings.steps;
  CVector previous = product_state(h, psi0, settings, steps, 0, nullptr);
  for (int i = 0; i < settings.max_refinements; ++i) {
    steps *= 2;
    CVector current = product_state(h, psi0, settings, steps, 0, nullptr);
    r.last_change = max_abs(current - previous);
    previous = std::move(current);
    if (r.last_change < settings.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.steps_used = steps;
  if (stride > 0) {
    // Re-run the accepted refinement with sampling switched on.
    r.state = product_state(h, psi0, settings, steps, stride, &r.trajectory);
  } else {
    r.state = std::move(previous);
  }
  return r;
}

CMatrix frame_rotate(const CMatrix& u, const CMatrix& generator, double angle) {
  if (angle == 0.0) return u;
  return expm((kI * angle) * generator) * u;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory) {
  const Eigen::Index dim = trajectory.empty() ? 0 : trajectory.front().amplitudes.size();
  out << "t_ns";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",re_amp_" << i << ",im_amp_" << i;
  out << '\n';
  for (const auto& s : trajectory) {
    out << format_double(s.t);
    for (Eigen::Index i = 0; i < dim; ++i)
      out << ',' << format_double(s.amplitudes(i).real()) << ',' << format_double(s.amplitudes(i).imag());
    out << '\n';
  }
}

}  // namespace hcps
