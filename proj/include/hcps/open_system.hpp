#pragma once

#include "hcps/gate_synthesis.hpp"
#include "hcps/propagation.hpp"

#include <limits>
#include <string>
#include <vector>

namespace hcps {

// Coherence times in microseconds; an infinite T1 disables relaxation.
struct DecoherenceParams {
  double T1_sc = std::numeric_limits<double>::infinity();
  double T2_sc = std::numeric_limits<double>::infinity();
  double T1_nv = std::numeric_limits<double>::infinity();
  double T2_nv = std::numeric_limits<double>::infinity();
  double kappa = 0.0;  // resonator energy decay rate, rad/ns

  // Throws std::invalid_argument on negative values or T2 > 2 T1.
  void validate() const;
};

// 1/T_phi = 1/T2 - 1/(2 T1), in 1/us. Zero when coherence is lifetime limited.
double pure_dephasing_rate(double T1_us, double T2_us);

struct CollapseOperator {
  CMatrix op;
  double rate = 0.0;  // 1/ns
  std::string label;
};

// Relaxation sigma_- at 1/T1 and dephasing sigma_z / sqrt2 at 1/T_phi per
// qubit, resonator loss a at kappa. All rates are multiplied by rate_scale;
// zero-rate channels are omitted.
std::vector<CollapseOperator> collapse_ops(const DecoherenceParams& dec, const SpaceLayout& layout,
                                           double rate_scale = 1.0);

class DensityMatrix {
 public:
  DensityMatrix(SpaceLayout layout, CMatrix entries);
  static DensityMatrix pure(const StateVector& psi);

  const SpaceLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return entries_; }

  double trace_defect() const { return std::abs(entries_.trace() - Complex(1.0, 0.0)); }
  double hermiticity_defect() const { return hcps::hermiticity_defect(entries_); }
  double min_eigenvalue() const;

 private:
  SpaceLayout layout_;
  CMatrix entries_;
};

struct MasterResult {
  std::vector<CMatrix> rho;
  bool converged = false;
  int steps_used = 0;
  double trace_defect = 0.0;
  double hermiticity_defect = 0.0;
};

// Integrates d rho/dt = -i[H, rho] + sum_k g_k (L rho L^dag - {L^dag L, rho}/2)
// for a batch of initial states sharing one step grid. Each step is a Strang
// splitting: half dissipator (RK4), unitary step of settings.integrator, half
// dissipator. Step doubling as in evolve_propagator; a final trace drift
// above 1e-6 clears `converged`.
MasterResult evolve_master(const HamiltonianFn& h, const std::vector<CMatrix>& rho0,
                           const std::vector<CollapseOperator>& collapse, const PropagationSettings& settings);

DensityMatrix evolve_master(const HamiltonianFn& h, const DensityMatrix& rho0,
                            const std::vector<CollapseOperator>& collapse, const PropagationSettings& settings,
                            bool* converged = nullptr);

struct OpenGateSettings {
  int fock_cutoff = 12;
  double tolerance = 1e-8;
  int base_steps = 8;
  int max_refinements = 14;
  Integrator integrator = Integrator::kMagnus4;
  double rate_scale = 1.0;
};

struct OpenGateResult {
  double fidelity_avg = 0.0;     // with dissipation
  double closed_fidelity = 0.0;  // same inputs, pure-state evolution
  double trace_defect = 0.0;
  bool converged = true;
};

// Average state fidelity of the pulse sequence (h_eff for t_int, then the NV
// and SC pulses) against exp[i eta (sx + Sx - sx Sx)] (x) |0><0|, over the
// four dressed basis states and two superpositions, resonator in vacuum.
OpenGateResult gate_fidelity_open(const SystemParams& params, const PulseSchedule& schedule,
                                  const DecoherenceParams& dec, const OpenGateSettings& settings = {});

}  // namespace hcps
