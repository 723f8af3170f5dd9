#pragma once

#include "hcps/hamiltonians.hpp"
#include "hcps/open_system.hpp"
#include "hcps/wei_norman.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcps {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unit tags accepted for frequencies and times. Frequencies convert to rad/ns,
// times to ns.
double frequency_to_rad_per_ns(double value, const std::string& unit);
double time_to_ns(double value, const std::string& unit);

enum class CouplingSolve { kNone, kG, kBoth };
enum class TargetKind { kCz, kControlledS };

struct ScheduleConfig {
  std::optional<double> eta;  // nullopt: calibrate
  TargetKind target = TargetKind::kCz;
  int m = 0;
  int max_n = 1;
  double commensurability_tol = 1e-9;
  CouplingSolve solve_coupling = CouplingSolve::kNone;
};

struct LindbladConfig {
  int fock_cutoff = 12;
  double tolerance = 1e-8;
  std::vector<double> scales{0.0, 0.5, 1.0, 2.0, 4.0};
};

struct CoeffsConfig {
  std::optional<double> t_max_ns;  // default: 4 pi / omega
  int points = 51;
};

struct SweepConfig {
  std::string parameter = "g";
  std::vector<double> scales{0.5, 1.0, 2.0};
};

struct RunConfig {
  SystemParams params;
  int fock_cutoff = 20;
  ScheduleConfig schedule;
  OracleOptions oracle;
  std::optional<DecoherenceParams> decoherence;
  LindbladConfig lindblad;
  CoeffsConfig coeffs;
  SweepConfig sweep;
  std::string output_dir = "hcps_out";
  int trajectory_stride = 0;
};

// Parses and validates a configuration document. Every frequency must carry a
// unit tag: {"value": 19.71, "unit": "MHz_cyclic"}. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// Scales one named physical parameter (g, G, omega, Delta, E_J0, Omega_mw, eps).
SystemParams scale_parameter(const SystemParams& p, const std::string& name, double factor);

}  // namespace hcps
