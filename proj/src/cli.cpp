#include "hcps/cli.hpp"

#include "hcps/config.hpp"
#include "hcps/io.hpp"
#include "hcps/open_system.hpp"
#include "hcps/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace hcps {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config;
  std::string out;
  int fock = 0;
  std::string eta;
};

RunConfig resolve(const CommonArgs& args) {
  RunConfig c = load_config(args.config);
  if (!args.out.empty()) c.output_dir = args.out;
  if (args.fock != 0) {
    if (args.fock < 2) throw ConfigError("--fock must be >= 2");
    c.fock_cutoff = args.fock;
  }
  if (!args.eta.empty()) {
    if (args.eta == "auto") {
      c.schedule.eta.reset();
    } else {
      try {
        std::size_t used = 0;
        c.schedule.eta = std::stod(args.eta, &used);
        if (used != args.eta.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw ConfigError("--eta expects a number or \"auto\", got '" + args.eta + "'");
      }
    }
  }
  return c;
}

GateSettings gate_settings(const RunConfig& c) {
  GateSettings s;
  s.schedule = c.schedule;
  s.fock_cutoff = c.fock_cutoff;
  s.oracle = c.oracle;
  return s;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

std::string f17(double x) { return format_double(x); }

// ---------------------------------------------------------------- gate

int cmd_gate(const RunConfig& c, std::ostream& out) {
  const GateRun run = run_gate(c.params, gate_settings(c));
  const GateReport& r = run.report;
  open_output(c.output_dir, "gate_report.json") << gate_report_json(r).dump(2) << "\n";

  out << "gate time      " << f17(r.gate_time_ns) << " ns (n = " << run.time.n << ", p = " << run.time.p << ")\n"
      << "pulses         tau1 = " << f17(run.schedule.tau1) << " ns, tau2 = " << f17(run.schedule.tau2) << " ns\n"
      << "eta used       " << f17(r.eta_used) << " (published " << f17(r.eta_paper) << ")\n"
      << "fidelity_avg   " << f17(r.fidelity_avg) << "\n"
      << "phase_distance " << f17(r.phase_distance) << "\n"
      << "leakage        " << f17(r.leakage) << "\n"
      << "relabeling     " << to_string(r.relabeling) << "\n"
      << "residual       " << f17(r.factorization_residual) << "\n";
  for (const auto& d : r.diagnostics) out << "  " << d << "\n";
  for (const auto& n : r.discrepancy_notes) out << "DISCREPANCY: " << n << "\n";

  if (c.trajectory_stride > 0) {
    const SpaceLayout layout(c.fock_cutoff);
    const HybridOperators ops(layout);
    // Uniform superposition of the dressed states = |up, up> (x) |0>.
    CVector psi = CVector::Zero(layout.total_dim());
    psi(layout.index(0, 0, 0)) = 1.0;
    PropagationSettings s;
    s.t0 = 0.0;
    s.t1 = run.schedule.t_int;
    s.steps = 64;
    s.tolerance = c.oracle.tolerance;
    s.max_refinements = c.oracle.max_refinements;
    s.integrator = c.oracle.integrator;
    const SystemParams p = run.params;
    const StateResult sr =
        evolve_state([&](double t) { return h_eff(p, ops, t).matrix(); }, psi, s, c.trajectory_stride);
    if (!sr.converged) throw NumericalError("trajectory propagation did not converge");
    auto f = open_output(c.output_dir, "trajectory.csv");
    write_trajectory_csv(f, sr.trajectory);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct Check {
  std::string name;
  double value;
  double threshold;
};

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const int n = c.fock_cutoff;
  const GateSettings settings = gate_settings(c);
  const GateRun run = run_gate(c.params, settings);
  const SystemParams& p = run.params;
  const double t_int = run.schedule.t_int;
  std::vector<Check> checks;

  {
    const SpaceLayout layout(n);
    const HybridOperators ops(layout);
    double worst = 0.0;
    auto h = [&](const Operator& op) { worst = std::max(worst, hermiticity_defect(op.matrix())); };
    h(h_charge_qubit(p, ops));
    h(h_nv(p, ops));
    for (double t : {0.0, 0.37, 1.9, t_int}) {
      h(h_total_lab(p, ops, t));
      h(h_interaction(p, ops, t));
      h(h_drive(p, ops, t));
      if (p.delta() != 0.0) h(h_T(p, ops, t));
      h(h_eff(p, ops, t));
    }
    checks.push_back({"hamiltonians hermitian", worst, 1e-12});

    const Operator g1 = u1(layout, p.zeta(), run.schedule.tau1);
    const Operator g2 = u2(layout, p.xi(), run.schedule.tau2);
    const Operator g3 = u3(layout, run.oracle.coeffs.A);
    double unit = std::max({unitarity_defect(g1.matrix()), unitarity_defect(g2.matrix()),
                            unitarity_defect(g3.matrix()), unitarity_defect(run.oracle.numeric),
                            run.oracle.unitarity_defect, run.report.unitarity_defect});
    checks.push_back({"propagators unitary", unit, 1e-9});
    const double comm = std::max({max_abs(commutator(g1, g2).matrix()), max_abs(commutator(g1, g3).matrix()),
                                  max_abs(commutator(g2, g3).matrix())});
    checks.push_back({"U1, U2, U3 commute", comm, 1e-12});

    // Independent propagation on the full space, no sector reduction.
    PropagationSettings s;
    s.t0 = 0.0;
    s.t1 = t_int;
    s.steps = 32;
    s.tolerance = 1e-9;
    s.max_refinements = 16;
    s.integrator = Integrator::kMagnus4;
    const PropagatorResult full = evolve_propagator([&](double t) { return h_eff(p, ops, t).matrix(); }, s);
    checks.push_back({"full-space propagation matches sector propagation",
                      full.converged ? resolved_max_difference(full.unitary, run.oracle.numeric, layout)
                                     : std::numeric_limits<double>::infinity(),
                      1e-7});
  }

  checks.push_back({"factorized vs numeric propagator", run.oracle.residual, c.oracle.residual_threshold});
  {
    double worst = 0.0;
    const std::vector<OracleResult> series =
        coefficients_oracle_series(p, {0.37 * t_int, 0.81 * t_int, t_int}, n, c.oracle);
    for (const OracleResult& o : series) {
      const WNCoefficients pr = coefficients_printed(p, o.coeffs.t);
      worst = std::max({worst, std::abs(pr.B - o.coeffs.B), std::abs(pr.C - o.coeffs.C)});
    }
    checks.push_back({"printed B, C vs oracle", worst, 1e-6});
  }
  {
    GateSettings doubled = settings;
    doubled.fock_cutoff = 2 * n;
    doubled.schedule.solve_coupling = CouplingSolve::kNone;
    doubled.schedule.eta = run.schedule.eta;
    const GateRun big = run_gate(p, doubled);
    checks.push_back({"fidelity change N = " + std::to_string(n) + " -> " + std::to_string(2 * n),
                      std::abs(big.report.fidelity_avg - run.report.fidelity_avg), 1e-8});
  }

  bool ok = true;
  for (const Check& ch : checks) {
    const bool pass = ch.value < ch.threshold;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << ch.name << ": " << f17(ch.value) << " (< " << f17(ch.threshold) << ")\n";
  }
  return ok ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- coeffs

int cmd_coeffs(const RunConfig& c, std::ostream& out) {
  const double t_max = c.coeffs.t_max_ns.value_or(2.0 * kTwoPi / c.params.omega);
  const int points = c.coeffs.points;
  std::vector<double> times;
  for (int k = 0; k < points; ++k) times.push_back(t_max * k / (points - 1));
  const std::vector<OracleResult> series = coefficients_oracle_series(c.params, times, c.fock_cutoff, c.oracle);

  auto f = open_output(c.output_dir, "coefficients.csv");
  f << "t_ns,A_oracle,reB,imB,reC,imC,reD,imD,A_printed,residual\n";
  bool converged = true;
  for (const OracleResult& o : series) {
    converged = converged && o.converged;
    const WNCoefficients& w = o.coeffs;
    const double a_printed = coefficients_printed(c.params, w.t).A;
    f << f17(w.t) << ',' << f17(w.A) << ',' << f17(w.B.real()) << ',' << f17(w.B.imag()) << ','
      << f17(w.C.real()) << ',' << f17(w.C.imag()) << ',' << f17(w.D.real()) << ',' << f17(w.D.imag()) << ','
      << f17(a_printed) << ',' << f17(o.residual) << '\n';
    const WNCoefficients pr = coefficients_printed(c.params, w.t);
    if (w.t > 0.0 && std::abs(pr.B) < 1e-12)
      out << "printed B vanishes at t = " << f17(w.t) << " ns (oracle |B| = " << f17(std::abs(w.B)) << ")\n";
  }
  out << "wrote " << series.size() << " rows to " << (fs::path(c.output_dir) / "coefficients.csv").string() << "\n";
  if (!converged) throw NumericalError("coefficient propagation did not converge");
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  struct Row {
    SystemParams params;
    GateReport report;
    std::string status = "ok";
  };
  const GateSettings settings = gate_settings(c);
  std::vector<Row> rows(c.sweep.scales.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    rows[i].params = scale_parameter(c.params, c.sweep.parameter, c.sweep.scales[i]);
    try {
      rows[i].report = run_gate(rows[i].params, settings).report;
    } catch (const std::exception& e) {
      rows[i].status = e.what();
    }
  });

  auto f = open_output(c.output_dir, "sweep.csv");
  f << "scale_factor,parameter,g,G,Delta,eta_used,fidelity_avg,phase_distance,leakage,gate_time_ns,status\n";
  std::vector<double> fidelities;
  bool ok = true;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const bool good = r.status == "ok";
    ok = ok && good;
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    fidelities.push_back(good ? r.report.fidelity_avg : nan);
    f << f17(c.sweep.scales[i]) << ',' << c.sweep.parameter << ',' << f17(r.params.g) << ',' << f17(r.params.G)
      << ',' << f17(r.params.delta()) << ',' << f17(good ? r.report.eta_used : nan) << ','
      << f17(fidelities.back()) << ',' << f17(good ? r.report.phase_distance : nan) << ','
      << f17(good ? r.report.leakage : nan) << ',' << f17(good ? r.report.gate_time_ns : nan) << ",\"" << status
      << "\"\n";
  }
  out << "sweep over " << c.sweep.parameter << ": " << rows.size() << " points, fidelity trend "
      << monotone_trend(fidelities) << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << "  x" << f17(c.sweep.scales[i]) << "  fidelity " << f17(fidelities[i])
        << (rows[i].status == "ok" ? "" : "  (" + rows[i].status + ")") << "\n";
  return ok ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- lindblad

int cmd_lindblad(const RunConfig& c, std::ostream& out) {
  if (!c.decoherence) throw ConfigError("lindblad needs a 'decoherence' section");
  const GateRun run = run_gate(c.params, gate_settings(c));

  auto f = open_output(c.output_dir, "lindblad.csv");
  f << "scale_factor,fidelity_avg,trace_defect\n";
  bool converged = true;
  double unit_loss = std::numeric_limits<double>::quiet_NaN();
  for (double scale : c.lindblad.scales) {
    OpenGateSettings s;
    s.fock_cutoff = c.lindblad.fock_cutoff;
    s.tolerance = c.lindblad.tolerance;
    s.rate_scale = scale;
    const OpenGateResult r = gate_fidelity_open(run.params, run.schedule, *c.decoherence, s);
    converged = converged && r.converged;
    f << f17(scale) << ',' << f17(r.fidelity_avg) << ',' << f17(r.trace_defect) << '\n';
    out << "rate x" << f17(scale) << ": fidelity " << f17(r.fidelity_avg) << " (closed " << f17(r.closed_fidelity)
        << ")\n";
    if (scale == 1.0) unit_loss = r.closed_fidelity - r.fidelity_avg;
  }
  if (!std::isnan(unit_loss)) out << "fidelity loss from decoherence at nominal rates: " << f17(unit_loss) << "\n";
  if (!converged) throw NumericalError("master-equation integration did not converge");
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid NV / charge-qubit controlled-phase gate simulator", "hcps"};
  app.require_subcommand(1);
  CommonArgs args;
  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands{
      {"gate", "synthesize the gate and write gate_report.json", cmd_gate},
      {"validate", "run the invariant suite", cmd_validate},
      {"coeffs", "write factorization coefficients over a time grid", cmd_coeffs},
      {"sweep", "run the gate over a parameter grid", cmd_sweep},
      {"lindblad", "gate fidelity under decoherence over a rate-scale grid", cmd_lindblad}};
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "configuration file (JSON)")->required();
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--fock", args.fock, "Fock cutoff override");
    sub->add_option("--eta", args.eta, "target phase, or 'auto' to calibrate");
    subs.emplace_back(sub, fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const RunConfig config = resolve(args);
    for (const auto& [sub, fn] : subs)
      if (sub->parsed()) return fn(config, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace hcps
