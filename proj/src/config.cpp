#include "hcps/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hcps {

using nlohmann::json;

double frequency_to_rad_per_ns(double value, const std::string& unit) {
  if (unit == "rad_per_ns" || unit == "GHz_angular") return value;
  if (unit == "GHz_cyclic") return kTwoPi * value;
  if (unit == "MHz_angular") return 1e-3 * value;
  if (unit == "MHz_cyclic") return kTwoPi * 1e-3 * value;
  throw ConfigError("unknown frequency unit '" + unit +
                    "' (expected rad_per_ns, GHz_angular, GHz_cyclic, MHz_angular or MHz_cyclic)");
}

double time_to_ns(double value, const std::string& unit) {
  if (unit == "ns") return value;
  if (unit == "us") return 1e3 * value;
  if (unit == "ms") return 1e6 * value;
  if (unit == "s") return 1e9 * value;
  throw ConfigError("unknown time unit '" + unit + "' (expected ns, us, ms or s)");
}

namespace {

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
  return x;
}

std::pair<double, std::string> tagged(const json& v, const std::string& what) {
  if (!v.is_object() || !v.contains("value") || !v.contains("unit"))
    throw ConfigError(what + " needs an explicit unit tag: {\"value\": ..., \"unit\": ...}");
  if (!v["unit"].is_string()) throw ConfigError(what + ".unit must be a string");
  return {number(v["value"], what + ".value"), v["unit"].get<std::string>()};
}

double frequency(const json& v, const std::string& what) {
  auto [x, unit] = tagged(v, what);
  return frequency_to_rad_per_ns(x, unit);
}

// Coherence time in microseconds; null means infinite.
double coherence_us(const json& v, const std::string& what) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  auto [x, unit] = tagged(v, what);
  return time_to_ns(x, unit) / 1e3;
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) throw ConfigError(what + " must be a non-empty array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what + "[]"));
  return out;
}

void parse_system(const json& sys, SystemParams& p) {
  if (!sys.is_object()) throw ConfigError("'system' must be an object");
  struct FreqField {
    const char* key;
    double SystemParams::*field;
  };
  const FreqField fields[] = {{"E_c", &SystemParams::E_c},         {"E_J0", &SystemParams::E_J0},
                              {"D_gs", &SystemParams::D_gs},       {"gamma_B", &SystemParams::gamma_B},
                              {"Omega_mw", &SystemParams::Omega_mw}, {"omega", &SystemParams::omega},
                              {"g", &SystemParams::g},             {"G", &SystemParams::G},
                              {"eps", &SystemParams::eps},         {"omega_d", &SystemParams::omega_d}};
  for (const auto& f : fields)
    if (const json* v = find(sys, f.key)) p.*f.field = frequency(*v, std::string("system.") + f.key);
  if (const json* v = find(sys, "n_g")) p.n_g = number(*v, "system.n_g");
  if (const json* v = find(sys, "flux_ratio")) p.flux_ratio = number(*v, "system.flux_ratio");

  const json* omega_r = find(sys, "omega_r");
  const json* delta = find(sys, "Delta");
  if (omega_r && delta) throw ConfigError("give either system.omega_r or system.Delta, not both");
  if (omega_r) p.omega_r = frequency(*omega_r, "system.omega_r");
  if (delta) p.omega_r = p.omega - frequency(*delta, "system.Delta");
  if (!find(sys, "omega")) throw ConfigError("system.omega is required");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  const json* sys = find(doc, "system");
  if (!sys) throw ConfigError("configuration needs a 'system' section");
  parse_system(*sys, c.params);
  try {
    c.params.validate();
  } catch (const NumericalError& e) {
    throw ConfigError(e.what());
  }

  if (const json* space = find(doc, "space"))
    if (const json* v = find(*space, "fock_cutoff")) c.fock_cutoff = integer(*v, "space.fock_cutoff");
  if (c.fock_cutoff < 2) throw ConfigError("space.fock_cutoff must be >= 2");

  if (const json* s = find(doc, "schedule")) {
    if (const json* v = find(*s, "eta")) {
      if (v->is_string()) {
        if (v->get<std::string>() != "auto") throw ConfigError("schedule.eta must be a number or \"auto\"");
      } else {
        c.schedule.eta = number(*v, "schedule.eta");
      }
    }
    if (const json* v = find(*s, "target")) {
      const std::string t = v->is_string() ? v->get<std::string>() : "";
      if (t == "cz")
        c.schedule.target = TargetKind::kCz;
      else if (t == "controlled_s")
        c.schedule.target = TargetKind::kControlledS;
      else
        throw ConfigError("schedule.target must be \"cz\" or \"controlled_s\"");
    }
    if (const json* v = find(*s, "m")) c.schedule.m = integer(*v, "schedule.m");
    if (const json* v = find(*s, "max_n")) c.schedule.max_n = integer(*v, "schedule.max_n");
    if (const json* v = find(*s, "commensurability_tol"))
      c.schedule.commensurability_tol = number(*v, "schedule.commensurability_tol");
    if (const json* v = find(*s, "solve_coupling")) {
      const std::string t = v->is_string() ? v->get<std::string>() : "";
      if (t == "none")
        c.schedule.solve_coupling = CouplingSolve::kNone;
      else if (t == "g")
        c.schedule.solve_coupling = CouplingSolve::kG;
      else if (t == "both")
        c.schedule.solve_coupling = CouplingSolve::kBoth;
      else
        throw ConfigError("schedule.solve_coupling must be \"none\", \"g\" or \"both\"");
    }
  }
  if (c.schedule.max_n < 1) throw ConfigError("schedule.max_n must be >= 1");

  if (const json* s = find(doc, "propagation")) {
    if (const json* v = find(*s, "tolerance")) c.oracle.tolerance = number(*v, "propagation.tolerance");
    if (const json* v = find(*s, "base_steps")) c.oracle.base_steps = integer(*v, "propagation.base_steps");
    if (const json* v = find(*s, "max_refinements"))
      c.oracle.max_refinements = integer(*v, "propagation.max_refinements");
    if (const json* v = find(*s, "integrator")) {
      const std::string t = v->is_string() ? v->get<std::string>() : "";
      if (t == "magnus4")
        c.oracle.integrator = Integrator::kMagnus4;
      else if (t == "midpoint")
        c.oracle.integrator = Integrator::kMidpoint;
      else
        throw ConfigError("propagation.integrator must be \"magnus4\" or \"midpoint\"");
    }
    if (const json* v = find(*s, "residual_threshold"))
      c.oracle.residual_threshold = number(*v, "propagation.residual_threshold");
  }
  if (!(c.oracle.tolerance > 0.0) || c.oracle.base_steps < 1 || c.oracle.max_refinements < 0)
    throw ConfigError("propagation settings need tolerance > 0, base_steps >= 1, max_refinements >= 0");

  if (const json* d = find(doc, "decoherence"); d && !d->is_null()) {
    DecoherenceParams dec;
    if (const json* v = find(*d, "T1_sc")) dec.T1_sc = coherence_us(*v, "decoherence.T1_sc");
    if (const json* v = find(*d, "T2_sc")) dec.T2_sc = coherence_us(*v, "decoherence.T2_sc");
    if (const json* v = find(*d, "T1_nv")) dec.T1_nv = coherence_us(*v, "decoherence.T1_nv");
    if (const json* v = find(*d, "T2_nv")) dec.T2_nv = coherence_us(*v, "decoherence.T2_nv");
    if (const json* v = find(*d, "kappa")) dec.kappa = frequency(*v, "decoherence.kappa");
    try {
      dec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("decoherence: ") + e.what());
    }
    c.decoherence = dec;
  }

  if (const json* l = find(doc, "lindblad")) {
    if (const json* v = find(*l, "fock_cutoff")) c.lindblad.fock_cutoff = integer(*v, "lindblad.fock_cutoff");
    if (const json* v = find(*l, "tolerance")) c.lindblad.tolerance = number(*v, "lindblad.tolerance");
    if (const json* v = find(*l, "scales")) c.lindblad.scales = number_list(*v, "lindblad.scales");
  }
  if (c.lindblad.fock_cutoff < 2) throw ConfigError("lindblad.fock_cutoff must be >= 2");

  if (const json* k = find(doc, "coeffs")) {
    if (const json* v = find(*k, "t_max")) {
      auto [x, unit] = tagged(*v, "coeffs.t_max");
      c.coeffs.t_max_ns = time_to_ns(x, unit);
    }
    if (const json* v = find(*k, "points")) c.coeffs.points = integer(*v, "coeffs.points");
  }
  if (c.coeffs.points < 2) throw ConfigError("coeffs.points must be >= 2");

  if (const json* s = find(doc, "sweep")) {
    if (const json* v = find(*s, "parameter")) {
      if (!v->is_string()) throw ConfigError("sweep.parameter must be a string");
      c.sweep.parameter = v->get<std::string>();
    }
    if (const json* v = find(*s, "scales")) c.sweep.scales = number_list(*v, "sweep.scales");
    try {
      scale_parameter(c.params, c.sweep.parameter, 1.0);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (const json* o = find(doc, "output")) {
    if (const json* v = find(*o, "dir")) {
      if (!v->is_string()) throw ConfigError("output.dir must be a string");
      c.output_dir = v->get<std::string>();
    }
    if (const json* v = find(*o, "trajectory_stride")) c.trajectory_stride = integer(*v, "output.trajectory_stride");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

SystemParams scale_parameter(const SystemParams& p, const std::string& name, double factor) {
  SystemParams q = p;
  if (name == "g")
    q.g *= factor;
  else if (name == "G")
    q.G *= factor;
  else if (name == "omega")
    q.omega *= factor;
  else if (name == "Delta")
    q.omega_r = q.omega - factor * p.delta();
  else if (name == "E_J0")
    q.E_J0 *= factor;
  else if (name == "Omega_mw")
    q.Omega_mw *= factor;
  else if (name == "eps")
    q.eps *= factor;
  else
    throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  return q;
}

}  // namespace hcps
