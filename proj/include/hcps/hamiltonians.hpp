#pragma once

#include "hcps/hilbert.hpp"

namespace hcps {

// Physical constants for one run. Every frequency is an angular frequency in
// rad/ns and hbar = 1.
struct SystemParams {
  double E_c = 0.0;         // charging energy
  double n_g = 0.5;         // dimensionless gate charge
  double E_J0 = 0.0;        // bare Josephson energy
  double flux_ratio = 0.0;  // Phi / Phi_0

  double D_gs = 0.0;      // NV zero-field splitting
  double gamma_B = 0.0;   // Zeeman shift gamma |B|
  double omega_r = 0.0;   // microwave frequency
  double Omega_mw = 0.0;  // NV microwave Rabi frequency

  double omega = 1.0;  // resonator frequency
  double g = 0.0;      // SC qubit - resonator coupling
  double G = 0.0;      // NV - resonator coupling

  double eps = 0.0;      // resonator drive amplitude (constant in time)
  double omega_d = 0.0;  // resonator drive frequency

  double zeta() const;     // E_J(Phi)
  double xi() const { return -Omega_mw; }
  double delta() const { return omega - omega_r; }
  double omega_0() const { return D_gs + gamma_B; }
  // G eps / Delta. Throws NumericalError when Delta == 0.
  double omega_prime() const;

  // Throws NumericalError on any non-finite field.
  void validate() const;
};

double ej_of_flux(double E_J0, double flux_ratio);
double effective_rabi(const SystemParams& p);

// Layout-bound embedded primitives, built once and reused by the
// time-dependent builders below.
class HybridOperators {
 public:
  explicit HybridOperators(const SpaceLayout& layout);

  const SpaceLayout& layout() const { return layout_; }

  const CMatrix& a() const { return a_; }
  const CMatrix& a_dag() const { return a_dag_; }
  const CMatrix& number() const { return number_; }
  const CMatrix& sigma_x() const { return sigma_x_; }
  const CMatrix& sigma_z() const { return sigma_z_; }
  const CMatrix& s_x() const { return s_x_; }
  const CMatrix& s_plus() const { return s_plus_; }
  const CMatrix& s_minus() const { return s_minus_; }
  const CMatrix& nv_up() const { return nv_up_; }  // |-1><-1|

  // Products used in every coupling term.
  const CMatrix& a_sigma_x() const { return a_sigma_x_; }
  const CMatrix& a_s_x() const { return a_s_x_; }
  const CMatrix& a_s_plus() const { return a_s_plus_; }
  const CMatrix& a_s_minus() const { return a_s_minus_; }

 private:
  SpaceLayout layout_;
  CMatrix a_, a_dag_, number_;
  CMatrix sigma_x_, sigma_z_, s_x_, s_plus_, s_minus_, nv_up_;
  CMatrix a_sigma_x_, a_s_x_, a_s_plus_, a_s_minus_;
};

// -4 E_c (1/2 - n_g) sigma_z - (1/2) E_J(Phi) sigma_x on the SC slot.
Operator h_charge_qubit(const SystemParams& p, const HybridOperators& ops);

// (omega_0 - omega_r) |-1><-1| + (Omega/2) S_x on the NV slot (microwave frame).
Operator h_nv(const SystemParams& p, const HybridOperators& ops);

// Lab-frame hybrid Hamiltonian.
Operator h_total_lab(const SystemParams& p, const HybridOperators& ops, double t);

// Interaction picture after the rotating-wave approximation.
Operator h_interaction(const SystemParams& p, const HybridOperators& ops, double t);

// eps (a^dag e^{-i omega_d t} + a e^{i omega_d t}).
Operator h_drive(const SystemParams& p, const HybridOperators& ops, double t);

// h_interaction + Omega' S_x.
Operator h_T(const SystemParams& p, const HybridOperators& ops, double t);

// Strong-driving effective Hamiltonian:
//   g (a^dag e^{i omega t} + a e^{-i omega t}) sigma_x
//     + (G/2) (a^dag e^{i Delta t} + a e^{-i Delta t}) S_x
Operator h_eff(const SystemParams& p, const HybridOperators& ops, double t);

// h_eff assembled from arbitrary representations of the two coupling
// operators a sigma_x and a S_x (e.g. their restriction to a joint
// sigma_x / S_x eigen-sector). h_eff is linear in both.
CMatrix h_eff_from(const SystemParams& p, double t, const CMatrix& a_sigma_x, const CMatrix& a_s_x);

}  // namespace hcps
