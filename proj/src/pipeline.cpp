#include "hcps/pipeline.hpp"

#include "hcps/io.hpp"

#include <algorithm>
#include <cmath>

namespace hcps {

Matrix4c target_matrix(TargetKind kind) {
  return kind == TargetKind::kCz ? ideal_cp_target() : controlled_phase_target(-kI);
}

namespace {

// Member of eta + k pi/2 with the sign of `a` and the smallest magnitude. The
// composed gate depends on eta only modulo pi/2, up to a global phase.
double eta_matching_sign(double eta, double a) {
  const double quarter = 0.5 * kPi;
  double r = std::fmod(eta, quarter);
  if (r < 0.0) r += quarter;
  if (a > 0.0) return r > 0.0 ? r : quarter;
  return r > 0.0 ? r - quarter : -quarter;
}

OracleResult checked_oracle(const SystemParams& p, double t, const GateSettings& s) {
  OracleResult o = coefficients_oracle(p, t, s.fock_cutoff, s.oracle);
  if (!o.converged)
    throw NumericalError("h_eff propagation did not reach tolerance " + format_double(s.oracle.tolerance) +
                         " within " + std::to_string(s.oracle.max_refinements) + " refinements");
  return o;
}

}  // namespace

GateRun run_gate(const SystemParams& params, const GateSettings& settings) {
  params.validate();
  GateRun run;
  run.params = params;
  const ScheduleConfig& sc = settings.schedule;

  run.time = commensurate_time(params.omega, params.delta(), sc.max_n, sc.commensurability_tol);
  const double t = run.time.t;
  const Matrix4c target = target_matrix(sc.target);
  run.calibration = calibrate_eta(target, sc.m);
  run.printed = coefficients_printed(params, t);

  const OracleResult bare = checked_oracle(params, t, settings);
  run.oracle = bare;
  const double a0 = bare.coeffs.A;

  double eta = sc.eta.value_or(run.calibration.eta);
  std::vector<std::string> notes;
  if (sc.solve_coupling != CouplingSolve::kNone) {
    if (std::abs(a0) < 1e-12)
      throw NumericalError("no sigma_x S_x phase accumulates at t = " + format_double(t) + " ns (n = " +
                           std::to_string(run.time.n) + ", p = " + std::to_string(run.time.p) +
                           "); the couplings cannot be solved for eta");
    eta = eta_matching_sign(eta, a0);
    // A is bilinear in (g, G).
    if (sc.solve_coupling == CouplingSolve::kBoth) {
      run.coupling_scale = std::sqrt(eta / a0);
      run.params.g *= run.coupling_scale;
      run.params.G *= run.coupling_scale;
    } else {
      run.coupling_scale = eta / a0;
      run.params.g *= run.coupling_scale;
    }
    run.oracle = checked_oracle(run.params, t, settings);
    notes.push_back("couplings rescaled by " + format_double(run.coupling_scale) +
                    (sc.solve_coupling == CouplingSolve::kBoth ? " (g and G)" : " (g only)") + ": g " +
                    format_double(params.g) + " -> " + format_double(run.params.g) + " rad/ns, G " +
                    format_double(params.G) + " -> " + format_double(run.params.G) +
                    " rad/ns, so that A(t_int) = eta; with the configured couplings A(t_int) = " + format_double(a0));
  } else if (!sc.eta) {
    eta = a0;
  }

  run.schedule.t_int = t;
  run.schedule.eta = eta;
  run.schedule.m = sc.m;
  run.schedule.n = run.time.n;
  run.schedule.p = run.time.p;
  run.schedule.tau1 = pulse_duration(run.params.zeta(), eta);
  run.schedule.tau2 = pulse_duration(run.params.xi(), eta);

  run.report = compose_sequence(run.schedule, run.params, run.oracle, settings.fock_cutoff, target);

  const double a_printed = coefficients_printed(run.params, t).A;
  if (std::abs(run.oracle.coeffs.A - a_printed) > 1e-6)
    run.report.discrepancy_notes.push_back(
        "printed A(t) = " + format_double(a_printed) + " at the commensurate time t = " + format_double(t) +
        " ns (n = " + std::to_string(run.time.n) + ", p = " + std::to_string(run.time.p) +
        ") but the propagated A = " + format_double(run.oracle.coeffs.A) +
        "; the printed expression cannot supply the gate phase, so U3 uses the propagated value");
  const double nominal = run.calibration.eta_paper;
  if (std::abs(std::remainder(nominal - run.calibration.eta, 0.5 * kPi)) > 1e-6)
    run.report.discrepancy_notes.push_back(
        "nominal eta = pi/8 + m pi/2 = " + format_double(nominal) + " gives controlled phase e^{-4i eta} = " +
        format_double(std::cos(4.0 * nominal)) + (std::sin(-4.0 * nominal) < 0 ? " - " : " + ") +
        format_double(std::abs(std::sin(-4.0 * nominal))) + "i and fidelity " +
        format_double(run.calibration.fidelity_nominal) + " against the target; calibrated eta = " +
        format_double(run.calibration.eta) + " reaches " + format_double(run.calibration.fidelity));
  for (auto& n : notes) run.report.discrepancy_notes.push_back(std::move(n));
  if (run.oracle.flagged)
    run.report.discrepancy_notes.push_back("factorized propagator differs from direct propagation by " +
                                           format_double(run.oracle.residual) + " (threshold " +
                                           format_double(settings.oracle.residual_threshold) + ")");
  return run;
}

nlohmann::json gate_report_json(const GateReport& r) {
  nlohmann::json j;
  j["fidelity_avg"] = r.fidelity_avg;
  j["phase_distance"] = r.phase_distance;
  j["leakage"] = r.leakage;
  j["eta_used"] = r.eta_used;
  j["eta_paper"] = r.eta_paper;
  j["gate_time_ns"] = r.gate_time_ns;
  j["relabeling"] = to_string(r.relabeling);
  j["discrepancy_notes"] = r.discrepancy_notes;
  return j;
}

std::vector<StrongDrivingPoint> strong_driving_check(const SystemParams& params, double t,
                                                     const std::vector<double>& ratios, int fock_cutoff,
                                                     int time_samples, double tolerance) {
  const SpaceLayout layout(fock_cutoff);
  const HybridOperators ops(layout);
  const double scale = std::max({std::abs(params.g), std::abs(params.G), std::abs(params.delta())});
  if (params.G == 0.0 || params.delta() == 0.0)
    throw NumericalError("strong-driving check needs G != 0 and Delta != 0");

  std::vector<int> inputs;
  for (int nv = 0; nv < 2; ++nv)
    for (int sc = 0; sc < 2; ++sc)
      for (int k = 0; k < 2; ++k) inputs.push_back(layout.index(nv, sc, k));

  auto chain = [&](const HamiltonianFn& h, double a, double b, bool& ok) {
    PropagationSettings s;
    s.t0 = a;
    s.t1 = b;
    s.steps = 8;
    s.tolerance = tolerance;
    s.max_refinements = 16;
    s.integrator = Integrator::kMagnus4;
    PropagatorResult r = evolve_propagator(h, s);
    ok = ok && r.converged;
    return r.unitary;
  };

  std::vector<StrongDrivingPoint> out;
  for (double ratio : ratios) {
    SystemParams p = params;
    const double target_rate = ratio * scale;
    p.eps = target_rate * p.delta() / p.G;
    StrongDrivingPoint pt;
    pt.ratio = ratio;
    pt.omega_prime = p.omega_prime();
    const HamiltonianFn ht = [&](double s) { return h_T(p, ops, s).matrix(); };
    const HamiltonianFn he = [&](double s) { return h_eff(p, ops, s).matrix(); };
    CMatrix ut = CMatrix::Identity(layout.total_dim(), layout.total_dim());
    CMatrix ue = ut;
    for (int j = 1; j <= time_samples; ++j) {
      const double a = t * (j - 1) / time_samples;
      const double b = t * j / time_samples;
      ut = chain(ht, a, b, pt.converged) * ut;
      ue = chain(he, a, b, pt.converged) * ue;
      const CMatrix overlap = ue.adjoint() * frame_rotate(ut, ops.s_x(), pt.omega_prime * b);
      for (int col : inputs) pt.min_fidelity = std::min(pt.min_fidelity, std::norm(overlap(col, col)));
    }
    out.push_back(pt);
  }
  return out;
}

std::string monotone_trend(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values)
    if (!std::isnan(x)) v.push_back(x);
  bool up = true, down = true, flat = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) up = false;
    if (v[i] > v[i - 1]) down = false;
    if (v[i] != v[i - 1]) flat = false;
  }
  if (flat) return "constant";
  if (up) return "increasing";
  if (down) return "decreasing";
  return "non-monotone";
}

}  // namespace hcps
