#pragma once

#include "hcps/config.hpp"
#include "hcps/gate_synthesis.hpp"
#include "hcps/wei_norman.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hcps {

struct GateSettings {
  ScheduleConfig schedule;
  int fock_cutoff = 20;
  OracleOptions oracle;
};

struct GateRun {
  SystemParams params;        // after any coupling solve
  double coupling_scale = 1.0;
  CommensurateTime time;
  CalibrationResult calibration;
  OracleResult oracle;        // at t_int, for `params`
  WNCoefficients printed;     // literal closed forms at t_int
  PulseSchedule schedule;
  GateReport report;
};

Matrix4c target_matrix(TargetKind kind);

// commensurate_time, calibration, oracle coefficients, optional coupling
// solve, pulse durations and composition. Throws NumericalError for an
// incommensurate Delta / omega or when the solve has nothing to scale, and
// ConditionError when a fixed eta cannot be met by the given couplings.
GateRun run_gate(const SystemParams& params, const GateSettings& settings);

// The documented report keys only.
nlohmann::json gate_report_json(const GateReport& report);

// Frame-rotated h_T propagation against h_eff over [0, t], started from the
// eight product states |nv, sc, k> with k in {0, 1}. Omega' is set by
// rescaling eps to ratio * max(g, G, |Delta|).
struct StrongDrivingPoint {
  double ratio = 0.0;
  double omega_prime = 0.0;
  double min_fidelity = 1.0;  // over the eight states and the sampled times
  bool converged = true;
};
std::vector<StrongDrivingPoint> strong_driving_check(const SystemParams& params, double t,
                                                     const std::vector<double>& ratios, int fock_cutoff = 8,
                                                     int time_samples = 4, double tolerance = 1e-9);

// "increasing", "decreasing", "constant" or "non-monotone", ignoring NaN.
std::string monotone_trend(const std::vector<double>& values);

}  // namespace hcps
