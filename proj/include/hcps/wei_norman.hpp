#pragma once

#include "hcps/hamiltonians.hpp"
#include "hcps/propagation.hpp"

#include <array>
#include <vector>

namespace hcps {

// Coefficients of the ordered product
//   e^{-iA sx Sx} e^{-iB a sx} e^{-iB* a^dag sx} e^{-iC a Sx} e^{-iC* a^dag Sx} e^{-iD}
// that reproduces the h_eff propagator U(t, 0).
struct WNCoefficients {
  double A = 0.0;
  Complex B{0.0, 0.0};
  Complex C{0.0, 0.0};
  Complex D{0.0, 0.0};
  double t = 0.0;
};

// Literal closed forms, no corrections applied. Throws
// NumericalError when omega or Delta vanishes.
WNCoefficients coefficients_printed(const SystemParams& p, double t);

// Joint eigen-sector of (sigma_x, S_x): sc_sign is the SC eigenvalue s1,
// nv_sign the NV eigenvalue s2.
struct Sector {
  int sc_sign;
  int nv_sign;
};
inline constexpr std::array<Sector, 4> kSectors{{{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}}};

// 4N x N isometry onto |nv_sign>_NV |sc_sign>_SC (x) Fock space.
CMatrix sector_isometry(const SpaceLayout& layout, Sector sector);

struct OracleOptions {
  double tolerance = 1e-10;
  int base_steps = 4;
  int max_refinements = 16;
  Integrator integrator = Integrator::kMagnus4;
  double residual_threshold = 1e-5;
};

struct OracleResult {
  WNCoefficients coeffs;
  // ||U_factorized - U_numeric||_max over the resolved input columns.
  double residual = 0.0;
  // Unitarity defect of the factorized product on the resolved columns.
  double unitarity_defect = 0.0;
  // Sector-phase components odd in a single sign; zero for an exact ansatz.
  double phase_asymmetry = 0.0;
  bool flagged = false;
  bool converged = true;
  // Resonator blocks <s| U |s> per sector, in kSectors order.
  std::array<CMatrix, 4> sector_blocks;
  // Brute-force propagator of h_eff assembled from the sector blocks.
  CMatrix numeric;
};

// Fixes A, B, C, D from the numerically propagated h_eff: within each
// (s1, s2) sector h_eff is a driven oscillator, so the vacuum column gives the
// displacement (-> B, C) and an unwrapped sector phase (-> A, D).
OracleResult coefficients_oracle(const SystemParams& p, double t, int fock_cutoff, const OracleOptions& opt = {});

// Same as coefficients_oracle at each of the ascending times in one sweep.
std::vector<OracleResult> coefficients_oracle_series(const SystemParams& p, const std::vector<double>& times,
                                                     int fock_cutoff, const OracleOptions& opt = {});

struct CommensurateTime {
  double t = 0.0;
  int n = 0;
  int p = 0;
};

// Smallest t = 2 pi n / omega (n <= max_n) with Delta t / 2 pi within tol of an
// integer p. Throws NumericalError naming the best approximation otherwise.
CommensurateTime commensurate_time(double omega, double delta, int max_n, double tol = 1e-9);

Operator factorized_propagator(const WNCoefficients& c, const SpaceLayout& layout);

// Input columns with Fock index below this are far from the cutoff; residuals
// and unitarity are judged there.
int resolved_fock_columns(int fock_cutoff);

// max |x - y| over every row and the resolved input columns.
double resolved_max_difference(const CMatrix& x, const CMatrix& y, const SpaceLayout& layout);

}  // namespace hcps
