#pragma once

#include "hcps/hamiltonians.hpp"
#include "hcps/wei_norman.hpp"

#include <string>
#include <vector>

namespace hcps {

// Two-qubit blocks use the lab product order (NV, SC) with up before down:
// index = 2 * nv + sc. The dressed order is (gg, ge, eg, ee), NV label first.

struct PulseSchedule {
  double tau1 = 0.0;   // SC flux pulse duration, ns
  double tau2 = 0.0;   // NV microwave pulse duration, ns
  double t_int = 0.0;  // resonator-mediated interaction time, ns
  double eta = 0.0;    // target phase
  int m = 0;           // branch of the nominal pi/8 + m pi/2 family
  int n = 0;           // commensurability witnesses
  int p = 0;
};

// Which g<->e relabeling (applied to both qubits) aligned the gate with its target.
enum class Relabeling { kNone, kSwapBoth };
std::string to_string(Relabeling r);

struct GateReport {
  Matrix4c synthesized;  // dressed basis
  Matrix4c target;
  double fidelity_avg = 0.0;
  double phase_distance = 0.0;
  double leakage = 0.0;
  double eta_used = 0.0;
  double eta_paper = 0.0;
  double gate_time_ns = 0.0;
  Relabeling relabeling = Relabeling::kNone;
  double unitarity_defect = 0.0;
  double off_diagonal = 0.0;          // largest off-diagonal modulus in the dressed basis
  double ideal_distance = 0.0;        // phase distance to exp[i eta (sx + Sx - sx Sx)]
  double factorization_residual = 0.0;
  std::vector<std::string> diagnostics;
  std::vector<std::string> discrepancy_notes;
};

// exp(i zeta sigma_x tau / 2) on the SC slot.
Operator u1(const SpaceLayout& layout, double zeta, double tau);
// exp(i xi S_x tau / 2) on the NV slot.
Operator u2(const SpaceLayout& layout, double xi, double tau);
// exp(-i A sigma_x S_x) on the qubit slots.
Operator u3(const SpaceLayout& layout, double A);

// Columns are |gg>, |ge>, |eg>, |ee> in the lab product basis, with
// |g> = (|up> - |down>)/sqrt2 and |e> = (|up> + |down>)/sqrt2.
Matrix4c dressed_basis();

namespace two_qubit {
Matrix4c sigma_x();  // SC
Matrix4c s_x();      // NV
// exp[i eta (sigma_x + S_x - sigma_x S_x)] in the lab product basis.
Matrix4c phase_gate(double eta);
// <0_res| op |0_res>.
Matrix4c vacuum_block(const CMatrix& op, const SpaceLayout& layout);
// g<->e on both qubits, expressed in the dressed basis.
Matrix4c relabel(const Matrix4c& u, Relabeling r);
}  // namespace two_qubit

Matrix4c ideal_cp_target();                 // diag(1, 1, 1, -1)
Matrix4c controlled_phase_target(Complex);  // diag(1, 1, 1, phase)

// (|Tr(V^dagger U)|^2 + d) / (d (d + 1)). Throws std::invalid_argument when
// either input is not unitary to 1e-6.
double gate_fidelity(const Matrix4c& u, const Matrix4c& v);
// min over phi of ||U - e^{i phi} V||_F.
double phase_distance(const Matrix4c& u, const Matrix4c& v);

struct AlignedComparison {
  double fidelity = 0.0;
  double phase_distance = 0.0;
  Relabeling relabeling = Relabeling::kNone;
};
// Best fidelity over the two relabelings.
AlignedComparison compare_aligned(const Matrix4c& dressed_u, const Matrix4c& target);

struct CalibrationSettings {
  int grid_points = 720;
  double tolerance = 1e-10;
};

struct CalibrationResult {
  double eta = 0.0;
  double fidelity = 0.0;
  Relabeling relabeling = Relabeling::kNone;
  double eta_paper = 0.0;
  double fidelity_nominal = 0.0;
};

// Maximizes the aligned fidelity of the ideal dressed-basis phase gate
// exp[i eta (sx + Sx - sx Sx)] against `target` over eta in [0, pi): a grid
// scan followed by golden-section refinement. The nominal pi/8 + m pi/2
// value is scored alongside.
CalibrationResult calibrate_eta(const Matrix4c& target, int m = 0, const CalibrationSettings& settings = {});

double nominal_eta(int m);

struct ConditionTolerances {
  double phase = 1e-9;  // single-qubit pulse phases
  double a = 1e-6;      // oracle A vs eta (mod pi)
};

// Error raised when a schedule violates one of the phase-matching conditions.
class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Durations realizing zeta tau1 / 2 = eta and xi tau2 / 2 = eta modulo 2 pi,
// both positive.
double pulse_duration(double rate, double eta);

// Builds U1 U2 U3 with U3 the factorized propagator at t_int (oracle
// coefficients, restricted to the resonator vacuum), moves it to the dressed
// basis and scores it against `target`. Throws ConditionError when a phase
// condition is off by more than its tolerance.
GateReport compose_sequence(const PulseSchedule& schedule, const SystemParams& params, int fock_cutoff,
                            const Matrix4c& target, const OracleOptions& oracle = {},
                            const ConditionTolerances& tol = {});

// Same, with precomputed oracle output for t_int.
GateReport compose_sequence(const PulseSchedule& schedule, const SystemParams& params, const OracleResult& u3_oracle,
                            int fock_cutoff, const Matrix4c& target, const ConditionTolerances& tol = {});

}  // namespace hcps
