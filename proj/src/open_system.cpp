#include "hcps/open_system.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <cmath>
#include <optional>
#include <stdexcept>

namespace hcps {

namespace {
constexpr double kNsPerUs = 1e3;

double rate_per_ns(double time_us) { return std::isinf(time_us) ? 0.0 : 1.0 / (time_us * kNsPerUs); }
}  // namespace

void DecoherenceParams::validate() const {
  for (double v : {T1_sc, T2_sc, T1_nv, T2_nv, kappa})
    if (std::isnan(v) || v < 0.0) throw std::invalid_argument("decoherence parameters must be nonnegative");
  if (T2_sc > 2.0 * T1_sc) throw std::invalid_argument("SC qubit violates T2 <= 2 T1");
  if (T2_nv > 2.0 * T1_nv) throw std::invalid_argument("NV qubit violates T2 <= 2 T1");
}

double pure_dephasing_rate(double T1_us, double T2_us) {
  if (T2_us > 2.0 * T1_us) throw std::invalid_argument("T2 > 2 T1 gives a negative dephasing rate");
  const double r2 = std::isinf(T2_us) ? 0.0 : 1.0 / T2_us;
  const double r1 = std::isinf(T1_us) ? 0.0 : 1.0 / T1_us;
  return std::max(0.0, r2 - 0.5 * r1);
}

std::vector<CollapseOperator> collapse_ops(const DecoherenceParams& dec, const SpaceLayout& layout,
                                           double rate_scale) {
  dec.validate();
  std::vector<CollapseOperator> out;
  auto add = [&](CMatrix op, double rate, std::string label) {
    if (rate * rate_scale > 0.0) out.push_back({std::move(op), rate * rate_scale, std::move(label)});
  };
  const CMatrix dephase = pauli::z() / std::sqrt(2.0);
  add(embed(pauli::minus(), Slot::kSc, layout).matrix(), rate_per_ns(dec.T1_sc), "sc_relaxation");
  add(embed(dephase, Slot::kSc, layout).matrix(), pure_dephasing_rate(dec.T1_sc, dec.T2_sc) / kNsPerUs,
      "sc_dephasing");
  add(embed(pauli::minus(), Slot::kNv, layout).matrix(), rate_per_ns(dec.T1_nv), "nv_relaxation");
  add(embed(dephase, Slot::kNv, layout).matrix(), pure_dephasing_rate(dec.T1_nv, dec.T2_nv) / kNsPerUs,
      "nv_dephasing");
  add(build_annihilation(layout).matrix(), dec.kappa, "resonator_loss");
  return out;
}

DensityMatrix::DensityMatrix(SpaceLayout layout, CMatrix entries) : layout_(layout), entries_(std::move(entries)) {
  if (entries_.rows() != layout_.total_dim() || entries_.cols() != layout_.total_dim())
    throw DimensionError("density matrix dimension does not match layout");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return {psi.layout(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

double DensityMatrix::min_eigenvalue() const {
  const CMatrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

// Every built-in collapse operator has at most one nonzero per row (sigma_-,
// sigma_z, a on one slot), so L rho L^dag is a gather over rho. Other
// operators fall back to sparse products.
class Dissipator {
 public:
  using Sparse = Eigen::SparseMatrix<Complex>;

  explicit Dissipator(const std::vector<CollapseOperator>& collapse) {
    if (collapse.empty()) return;
    const auto d = collapse.front().op.rows();
    CMatrix anti = CMatrix::Zero(d, d);
    for (const auto& c : collapse) {
      anti += (0.5 * c.rate) * (c.op.adjoint() * c.op);
      const CMatrix l = std::sqrt(c.rate) * c.op;
      if (auto m = as_monomial(l))
        monomial_.push_back(std::move(*m));
      else
        general_.push_back({l.sparseView(), CMatrix(l.adjoint()).sparseView()});
    }
    if (max_abs(CMatrix(anti.diagonal().asDiagonal()) - anti) == 0.0)
      anti_diag_ = anti.diagonal();
    else
      anti_ = anti.sparseView();
  }

  bool empty() const { return monomial_.empty() && general_.empty(); }

  CMatrix apply(const CMatrix& rho) const {
    const Eigen::Index d = rho.rows();
    CMatrix out(d, d);
    if (anti_diag_.size() > 0) {
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) out(i, j) = -(anti_diag_(i) + anti_diag_(j)) * rho(i, j);
    } else {
      out = -(anti_ * rho);
      out -= rho * anti_;
    }
    for (const Monomial& m : monomial_)
      for (Eigen::Index j = 0; j < d; ++j) {
        if (m.col[j] < 0) continue;
        const Complex cj = std::conj(m.val[j]);
        for (Eigen::Index i = 0; i < d; ++i)
          if (m.col[i] >= 0) out(i, j) += m.val[i] * rho(m.col[i], m.col[j]) * cj;
      }
    for (const auto& [l, l_dag] : general_) out += CMatrix(l * rho) * l_dag;
    return out;
  }

  // Classical RK4 for the linear, time-independent dissipator.
  void advance(CMatrix& rho, double dt) const {
    if (empty()) return;
    const CMatrix k1 = apply(rho);
    const CMatrix k2 = apply(rho + 0.5 * dt * k1);
    const CMatrix k3 = apply(rho + 0.5 * dt * k2);
    const CMatrix k4 = apply(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

 private:
  // Row i holds val[i] at column col[i]; col[i] < 0 marks an empty row.
  struct Monomial {
    std::vector<Eigen::Index> col;
    std::vector<Complex> val;
  };

  static std::optional<Monomial> as_monomial(const CMatrix& l) {
    Monomial m{std::vector<Eigen::Index>(l.rows(), -1), std::vector<Complex>(l.rows())};
    for (Eigen::Index i = 0; i < l.rows(); ++i)
      for (Eigen::Index j = 0; j < l.cols(); ++j) {
        if (l(i, j) == Complex(0.0, 0.0)) continue;
        if (m.col[i] >= 0) return std::nullopt;
        m.col[i] = j;
        m.val[i] = l(i, j);
      }
    return m;
  }

  std::vector<Monomial> monomial_;
  std::vector<std::pair<Sparse, Sparse>> general_;
  Eigen::VectorXcd anti_diag_;
  Sparse anti_;
};

// Strang splitting; the dissipator half steps of neighbouring steps are merged.
std::vector<CMatrix> run_master(const HamiltonianFn& h, const std::vector<CMatrix>& rho0, const Dissipator& diss,
                                const PropagationSettings& s, int steps) {
  const double dt = (s.t1 - s.t0) / steps;
  std::vector<CMatrix> rho = rho0;
  for (auto& r : rho) diss.advance(r, 0.5 * dt);
  for (int k = 0; k < steps; ++k) {
    const CMatrix u = step_propagator(h, s.t0 + k * dt, dt, s.integrator);
    for (auto& r : rho) {
      r = u * r * u.adjoint();
      diss.advance(r, k + 1 < steps ? dt : 0.5 * dt);
    }
  }
  return rho;
}

double batch_change(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_abs(a[i] - b[i]));
  return worst;
}

}  // namespace

MasterResult evolve_master(const HamiltonianFn& h, const std::vector<CMatrix>& rho0,
                           const std::vector<CollapseOperator>& collapse, const PropagationSettings& settings) {
  settings.validate();
  const Dissipator diss(collapse);
  MasterResult r;
  int steps = settings.steps;
  std::vector<CMatrix> previous = run_master(h, rho0, diss, settings, steps);
  for (int i = 0; i < settings.max_refinements; ++i) {
    steps *= 2;
    std::vector<CMatrix> current = run_master(h, rho0, diss, settings, steps);
    const double change = batch_change(current, previous);
    previous = std::move(current);
    if (change < settings.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.rho = std::move(previous);
  r.steps_used = steps;
  for (const auto& m : r.rho) {
    r.trace_defect = std::max(r.trace_defect, std::abs(m.trace() - Complex(1.0, 0.0)));
    r.hermiticity_defect = std::max(r.hermiticity_defect, hermiticity_defect(m));
  }
  if (r.trace_defect > 1e-6) r.converged = false;
  return r;
}

DensityMatrix evolve_master(const HamiltonianFn& h, const DensityMatrix& rho0,
                            const std::vector<CollapseOperator>& collapse, const PropagationSettings& settings,
                            bool* converged) {
  MasterResult r = evolve_master(h, std::vector<CMatrix>{rho0.matrix()}, collapse, settings);
  if (converged) *converged = r.converged;
  return {rho0.layout(), std::move(r.rho.front())};
}

namespace {

std::vector<CVector> fidelity_inputs(const SpaceLayout& layout) {
  const Matrix4c w = dressed_basis();
  std::vector<Eigen::Vector4cd> qubit;
  for (int i = 0; i < 4; ++i) qubit.push_back(w.col(i));
  qubit.push_back((w.col(0) + w.col(3)) / std::sqrt(2.0));
  qubit.push_back(0.5 * (w.col(0) + w.col(1) + w.col(2) + w.col(3)));
  std::vector<CVector> out;
  for (const auto& q : qubit) {
    CVector psi = CVector::Zero(layout.total_dim());
    for (int i = 0; i < 4; ++i) psi(layout.index(i / 2, i % 2, 0)) = q(i);
    out.push_back(psi);
  }
  return out;
}

}  // namespace

OpenGateResult gate_fidelity_open(const SystemParams& params, const PulseSchedule& schedule,
                                  const DecoherenceParams& dec, const OpenGateSettings& settings) {
  const SpaceLayout layout(settings.fock_cutoff);
  const HybridOperators ops(layout);
  const auto collapse = collapse_ops(dec, layout, settings.rate_scale);

  const CMatrix h_sc = (-0.5 * params.zeta()) * ops.sigma_x();
  const CMatrix h_nv_pulse = (-0.5 * params.xi()) * ops.s_x();
  struct Segment {
    HamiltonianFn h;
    double duration;
  };
  // U = U1 U2 U3: the interaction acts first in time.
  const std::vector<Segment> segments{
      {[&](double t) { return CMatrix(h_eff(params, ops, t).matrix()); }, schedule.t_int},
      {[&](double) { return h_nv_pulse; }, schedule.tau2},
      {[&](double) { return h_sc; }, schedule.tau1},
  };

  const auto inputs = fidelity_inputs(layout);
  std::vector<CMatrix> rho;
  std::vector<CVector> psi = inputs;
  for (const auto& v : inputs) rho.push_back(v * v.adjoint());

  OpenGateResult out;
  for (const auto& seg : segments) {
    PropagationSettings s;
    s.t0 = 0.0;
    s.t1 = seg.duration;
    s.steps = settings.base_steps;
    s.tolerance = settings.tolerance;
    s.max_refinements = settings.max_refinements;
    s.integrator = settings.integrator;
    MasterResult m = evolve_master(seg.h, rho, collapse, s);
    out.converged = out.converged && m.converged;
    rho = std::move(m.rho);
    const PropagatorResult u = evolve_propagator(seg.h, s);
    out.converged = out.converged && u.converged;
    for (auto& v : psi) v = u.unitary * v;
  }

  const Matrix4c ideal = two_qubit::phase_gate(schedule.eta);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    CVector target = CVector::Zero(layout.total_dim());
    for (int q = 0; q < 4; ++q) {
      Complex amp{0.0, 0.0};
      for (int q2 = 0; q2 < 4; ++q2) amp += ideal(q, q2) * inputs[i](layout.index(q2 / 2, q2 % 2, 0));
      target(layout.index(q / 2, q % 2, 0)) = amp;
    }
    out.fidelity_avg += std::real(target.dot(rho[i] * target));
    out.closed_fidelity += std::norm(target.dot(psi[i]));
    out.trace_defect = std::max(out.trace_defect, std::abs(rho[i].trace() - Complex(1.0, 0.0)));
  }
  out.fidelity_avg /= static_cast<double>(inputs.size());
  out.closed_fidelity /= static_cast<double>(inputs.size());
  return out;
}

}  // namespace hcps
