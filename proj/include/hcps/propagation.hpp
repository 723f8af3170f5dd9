#pragma once

#include "hcps/hilbert.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace hcps {

// Hermitian generator sampled at time t (ns).
using HamiltonianFn = std::function<CMatrix(double)>;

enum class Integrator {
  kMidpoint,  // exp(-i H(t_mid) dt), second order
  kMagnus4,   // commutator-free Magnus, two Gauss-point exponentials, fourth order
};

struct PropagationSettings {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 16;
  double tolerance = 1e-8;  // max-norm change between successive refinements
  int max_refinements = 14;
  Integrator integrator = Integrator::kMidpoint;

  // Throws std::invalid_argument on t1 <= t0, steps < 1 or tolerance <= 0.
  void validate() const;
};

struct PropagatorResult {
  CMatrix unitary;
  double unitarity_defect = 0.0;
  bool converged = false;
  int steps_used = 0;
  double last_change = 0.0;  // max-norm difference to the previous refinement
};

// U(t1, t0) as an ordered product of short-time exponentials. Step count is
// doubled until successive propagators agree to `tolerance`; a run that hits
// max_refinements reports converged = false instead of throwing. Throws
// NumericalError when a sampled generator is not Hermitian.
PropagatorResult evolve_propagator(const HamiltonianFn& h, const PropagationSettings& settings);

struct TrajectorySample {
  double t = 0.0;
  CVector amplitudes;
};

struct StateResult {
  CVector state;
  bool converged = false;
  int steps_used = 0;
  double last_change = 0.0;
  std::vector<TrajectorySample> trajectory;  // filled when stride > 0
};

// Same stepping contract as evolve_propagator, acting on a state. With
// stride > 0 every stride-th step of the final refinement is recorded (plus
// both end points).
StateResult evolve_state(const HamiltonianFn& h, const CVector& psi0, const PropagationSettings& settings,
                         int stride = 0);

// exp(+i angle * generator) U.
CMatrix frame_rotate(const CMatrix& u, const CMatrix& generator, double angle);

// One step U(t + dt, t) of the chosen scheme.
CMatrix step_propagator(const HamiltonianFn& h, double t, double dt, Integrator integrator);

// Header `t_ns,re_amp_0,im_amp_0,...`; 17 significant digits.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory);

}  // namespace hcps
