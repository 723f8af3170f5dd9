#include "hcps/wei_norman.hpp"

#include "hcps/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hcps {

WNCoefficients coefficients_printed(const SystemParams& p, double t) {
  const double w = p.omega;
  const double d = p.delta();
  if (w == 0.0) throw NumericalError("printed coefficients need omega != 0");
  if (d == 0.0) throw NumericalError("printed coefficients need Delta != 0");
  WNCoefficients c;
  c.t = t;
  c.A = p.g * p.G / w * (std::cos(d * t) - std::cos((w - d) * t));
  c.B = kI * p.g / w * (std::exp(-kI * (w * t)) - 1.0);
  c.C = kI * p.G / (2.0 * d) * (std::exp(-kI * (d * t)) - 1.0);
  c.D = p.g * p.g / w * ((std::exp(kI * (w * t)) - 1.0) / (kI * w) - t) +
        p.G * p.G / (4.0 * d) * ((std::exp(kI * (d * t)) - 1.0) / (kI * d) - t);
  return c;
}

CMatrix sector_isometry(const SpaceLayout& layout, Sector sector) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd nv(r, r * sector.nv_sign);
  Eigen::Vector2cd sc(r, r * sector.sc_sign);
  const int n = layout.fock_cutoff();
  return kron(nv, kron(sc, CMatrix::Identity(n, n)));
}

int resolved_fock_columns(int fock_cutoff) { return std::max(1, fock_cutoff / 5); }

double resolved_max_difference(const CMatrix& x, const CMatrix& y, const SpaceLayout& layout) {
  const int k_max = resolved_fock_columns(layout.fock_cutoff());
  double worst = 0.0;
  for (int q = 0; q < 4; ++q)
    for (int k = 0; k < k_max; ++k) {
      const int col = q * layout.fock_cutoff() + k;
      worst = std::max(worst, max_abs(x.col(col) - y.col(col)));
    }
  return worst;
}

namespace {

CMatrix resolved_columns(const CMatrix& u, const SpaceLayout& layout) {
  const int k_max = resolved_fock_columns(layout.fock_cutoff());
  CMatrix out(u.rows(), 4 * k_max);
  for (int q = 0; q < 4; ++q)
    for (int k = 0; k < k_max; ++k) out.col(q * k_max + k) = u.col(q * layout.fock_cutoff() + k);
  return out;
}

// V^dagger H V for V = |nv>|sc> (x) I, using the 4x4 qubit block structure of H.
CMatrix project_sector(const CMatrix& h, Sector sector, int n) {
  const double r = 0.25;
  const double amp[4] = {1.0, static_cast<double>(sector.sc_sign), static_cast<double>(sector.nv_sign),
                         static_cast<double>(sector.nv_sign * sector.sc_sign)};
  CMatrix out = CMatrix::Zero(n, n);
  for (int q = 0; q < 4; ++q)
    for (int q2 = 0; q2 < 4; ++q2) out += (r * amp[q] * amp[q2]) * h.block(q * n, q2 * n, n, n);
  return out;
}

struct SectorTrack {
  CMatrix a_sigma_x;  // V^dagger (a sigma_x) V
  CMatrix a_s_x;      // V^dagger (a S_x) V
  CMatrix projector;  // isometry V
  CMatrix u;          // accumulated N x N propagator
  Complex vacuum{1.0, 0.0};
  double phase = 0.0;  // unwrapped arg <0|U|0>
};

WNCoefficients extract(const std::array<SectorTrack, 4>& tracks, double t, double* asymmetry) {
  Complex b{0.0, 0.0}, c{0.0, 0.0};
  double theta0 = 0.0, theta_x = 0.0, odd_sc = 0.0, odd_nv = 0.0;
  for (std::size_t i = 0; i < kSectors.size(); ++i) {
    const Sector s = kSectors[i];
    const Complex beta = tracks[i].u(1, 0) / tracks[i].u(0, 0);
    b += 0.25 * s.sc_sign * beta;
    c += 0.25 * s.nv_sign * beta;
    theta0 += 0.25 * tracks[i].phase;
    theta_x += 0.25 * s.sc_sign * s.nv_sign * tracks[i].phase;
    odd_sc += 0.25 * s.sc_sign * tracks[i].phase;
    odd_nv += 0.25 * s.nv_sign * tracks[i].phase;
  }
  if (asymmetry) *asymmetry = std::max(std::abs(odd_sc), std::abs(odd_nv));
  // Sector displacement beta = s1 b + s2 c with b = -i B*, c = -i C*.
  WNCoefficients out;
  out.t = t;
  out.B = -kI * std::conj(b);
  out.C = -kI * std::conj(c);
  // Exact product of the ansatz in a sector:
  //   exp(-i s1 s2 (A - Im(B* C)) - i Re D + Im D - (|B|^2 + |C|^2)/2) D(beta)
  out.A = std::imag(std::conj(out.B) * out.C) - theta_x;
  out.D = Complex(-theta0, 0.5 * (std::norm(out.B) + std::norm(out.C)));
  return out;
}

}  // namespace

std::vector<OracleResult> coefficients_oracle_series(const SystemParams& p, const std::vector<double>& times,
                                                     int fock_cutoff, const OracleOptions& opt) {
  p.validate();
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("oracle times must be ascending");
  if (!times.empty() && times.front() < 0.0) throw std::invalid_argument("oracle times must be >= 0");

  const SpaceLayout layout(fock_cutoff);
  const HybridOperators ops(layout);
  const int n = fock_cutoff;

  std::array<SectorTrack, 4> tracks;
  for (std::size_t i = 0; i < kSectors.size(); ++i) {
    tracks[i].projector = sector_isometry(layout, kSectors[i]);
    tracks[i].a_sigma_x = project_sector(ops.a_sigma_x(), kSectors[i], n);
    tracks[i].a_s_x = project_sector(ops.a_s_x(), kSectors[i], n);
    tracks[i].u = CMatrix::Identity(n, n);
  }

  // Chunk length keeps the per-chunk change of every sector phase well below pi.
  const double w = std::abs(p.omega), d = std::abs(p.delta());
  const double displacement = (w > 0 ? 2.0 * std::abs(p.g) / w : 0.0) + (d > 0 ? std::abs(p.G) / d : 0.0);
  const double phase_rate = displacement * (std::abs(p.g) + 0.5 * std::abs(p.G));
  const double max_chunk = 0.25 * kPi / std::max({w, d, phase_rate, 1e-12});

  std::vector<OracleResult> results;
  results.reserve(times.size());
  double t_now = 0.0;
  bool converged = true;

  for (double target : times) {
    while (t_now < target) {
      const double t_next = std::min(target, t_now + max_chunk);
      PropagationSettings s;
      s.t0 = t_now;
      s.t1 = t_next;
      s.steps = opt.base_steps;
      s.tolerance = opt.tolerance;
      s.max_refinements = opt.max_refinements;
      s.integrator = opt.integrator;
      for (auto& tr : tracks) {
        HamiltonianFn h = [&](double t) { return h_eff_from(p, t, tr.a_sigma_x, tr.a_s_x); };
        const PropagatorResult chunk = evolve_propagator(h, s);
        converged = converged && chunk.converged;
        tr.u = chunk.unitary * tr.u;
        const Complex z = tr.u(0, 0);
        tr.phase += std::arg(z / tr.vacuum);
        tr.vacuum = z;
      }
      t_now = t_next;
    }

    OracleResult r;
    r.converged = converged;
    r.coeffs = extract(tracks, target, &r.phase_asymmetry);
    r.numeric = CMatrix::Zero(layout.total_dim(), layout.total_dim());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      r.sector_blocks[i] = tracks[i].u;
      r.numeric += tracks[i].projector * tracks[i].u * tracks[i].projector.adjoint();
    }
    const CMatrix factorized = factorized_propagator(r.coeffs, layout).matrix();
    r.residual = resolved_max_difference(factorized, r.numeric, layout);
    r.unitarity_defect = unitarity_defect(resolved_columns(factorized, layout));
    r.flagged = r.residual > opt.residual_threshold;
    results.push_back(std::move(r));
  }
  return results;
}

OracleResult coefficients_oracle(const SystemParams& p, double t, int fock_cutoff, const OracleOptions& opt) {
  return coefficients_oracle_series(p, {t}, fock_cutoff, opt).front();
}

CommensurateTime commensurate_time(double omega, double delta, int max_n, double tol) {
  if (!(omega > 0.0)) throw NumericalError("commensurate time needs omega > 0");
  if (delta == 0.0) throw NumericalError("commensurate time needs Delta != 0");
  if (max_n < 1) throw NumericalError("commensurate time needs max_n >= 1");
  double best_err = std::numeric_limits<double>::infinity();
  CommensurateTime best;
  for (int n = 1; n <= max_n; ++n) {
    const double t = kTwoPi * n / omega;
    const double cycles = delta * t / kTwoPi;
    const double p = std::round(cycles);
    const double err = std::abs(cycles - p);
    if (err < tol && p != 0.0) return {t, n, static_cast<int>(p)};
    if (err < best_err) {
      best_err = err;
      best = {t, n, static_cast<int>(p)};
    }
  }
  throw NumericalError("no commensurate time with n <= " + std::to_string(max_n) + "; best approximation n = " +
                       std::to_string(best.n) + ", p = " + std::to_string(best.p) + " (Delta t / 2pi off by " +
                       format_double(best_err) + ")");
}

Operator factorized_propagator(const WNCoefficients& c, const SpaceLayout& layout) {
  const HybridOperators ops(layout);
  const CMatrix& a_sx = ops.a_sigma_x();
  const CMatrix& a_Sx = ops.a_s_x();
  CMatrix u = expm((-kI * c.A) * (ops.sigma_x() * ops.s_x()));
  u *= expm((-kI * c.B) * a_sx);
  u *= expm((-kI * std::conj(c.B)) * a_sx.adjoint());
  u *= expm((-kI * c.C) * a_Sx);
  u *= expm((-kI * std::conj(c.C)) * a_Sx.adjoint());
  u *= std::exp(-kI * c.D);
  return {layout, u};
}

}  // namespace hcps
