#include "hcps/hamiltonians.hpp"

#include <cmath>

namespace hcps {

double ej_of_flux(double E_J0, double flux_ratio) { return E_J0 * std::cos(kPi * flux_ratio); }

double SystemParams::zeta() const { return ej_of_flux(E_J0, flux_ratio); }

double SystemParams::omega_prime() const {
  if (delta() == 0.0) throw NumericalError("effective Rabi frequency undefined: Delta = omega - omega_r = 0");
  return G * eps / delta();
}

double effective_rabi(const SystemParams& p) { return p.omega_prime(); }

void SystemParams::validate() const {
  const double fields[] = {E_c, n_g, E_J0, flux_ratio, D_gs, gamma_B, omega_r, Omega_mw, omega, g, G, eps, omega_d};
  for (double f : fields)
    if (!std::isfinite(f)) throw NumericalError("system parameters must be finite");
}

HybridOperators::HybridOperators(const SpaceLayout& layout) : layout_(layout) {
  a_ = build_annihilation(layout).matrix();
  a_dag_ = a_.adjoint();
  number_ = build_number(layout).matrix();
  const SpinOps sc = build_spin_ops(layout, Slot::kSc);
  const SpinOps nv = build_spin_ops(layout, Slot::kNv);
  sigma_x_ = sc.x.matrix();
  sigma_z_ = sc.z.matrix();
  s_x_ = nv.x.matrix();
  s_plus_ = nv.plus.matrix();
  s_minus_ = nv.minus.matrix();
  nv_up_ = embed(pauli::up_projector(), Slot::kNv, layout).matrix();
  a_sigma_x_ = a_ * sigma_x_;
  a_s_x_ = a_ * s_x_;
  a_s_plus_ = a_ * s_plus_;
  a_s_minus_ = a_ * s_minus_;
}

namespace {
// c X + conj(c) X^dagger, Hermitian by construction.
CMatrix hermitian_pair(Complex c, const CMatrix& x) {
  CMatrix m = c * x;
  return m + m.adjoint();
}
}  // namespace

Operator h_charge_qubit(const SystemParams& p, const HybridOperators& ops) {
  const double z_coeff = -4.0 * p.E_c * (0.5 - p.n_g);
  const double x_coeff = -0.5 * p.zeta();
  return {ops.layout(), z_coeff * ops.sigma_z() + x_coeff * ops.sigma_x()};
}

Operator h_nv(const SystemParams& p, const HybridOperators& ops) {
  return {ops.layout(), (p.omega_0() - p.omega_r) * ops.nv_up() + (0.5 * p.Omega_mw) * ops.s_x()};
}

Operator h_total_lab(const SystemParams& p, const HybridOperators& ops, double t) {
  CMatrix h = p.omega * ops.number() - (0.5 * p.zeta()) * ops.sigma_x() - (0.5 * p.xi()) * ops.s_x();
  h += p.g * (ops.a_sigma_x() + ops.a_sigma_x().adjoint());
  // G (a + a^dag)(S+ e^{i w_r t} + S- e^{-i w_r t}); the spin factor is Hermitian
  // and commutes with (a + a^dag), so the product is Hermitian.
  const Complex ph = std::exp(kI * (p.omega_r * t));
  const CMatrix spin = ph * ops.s_plus() + std::conj(ph) * ops.s_minus();
  h += p.G * ((ops.a() + ops.a_dag()) * spin);
  return {ops.layout(), h};
}

Operator h_interaction(const SystemParams& p, const HybridOperators& ops, double t) {
  // g (a^dag e^{iwt} + a e^{-iwt}) sigma_x + G (a^dag S- e^{iDt} + a S+ e^{-iDt})
  CMatrix h = hermitian_pair(p.g * std::exp(-kI * (p.omega * t)), ops.a_sigma_x());
  h += hermitian_pair(p.G * std::exp(-kI * (p.delta() * t)), ops.a_s_plus());
  return {ops.layout(), h};
}

Operator h_drive(const SystemParams& p, const HybridOperators& ops, double t) {
  return {ops.layout(), hermitian_pair(p.eps * std::exp(kI * (p.omega_d * t)), ops.a())};
}

Operator h_T(const SystemParams& p, const HybridOperators& ops, double t) {
  Operator h = h_interaction(p, ops, t);
  return h + Operator(ops.layout(), p.omega_prime() * ops.s_x());
}

CMatrix h_eff_from(const SystemParams& p, double t, const CMatrix& a_sigma_x, const CMatrix& a_s_x) {
  CMatrix h = hermitian_pair(p.g * std::exp(-kI * (p.omega * t)), a_sigma_x);
  h += hermitian_pair(0.5 * p.G * std::exp(-kI * (p.delta() * t)), a_s_x);
  return h;
}

Operator h_eff(const SystemParams& p, const HybridOperators& ops, double t) {
  return {ops.layout(), h_eff_from(p, t, ops.a_sigma_x(), ops.a_s_x())};
}

}  // namespace hcps
