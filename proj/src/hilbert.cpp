#include "hcps/hilbert.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace hcps {

SpaceLayout::SpaceLayout(int fock_cutoff) : fock_cutoff_(fock_cutoff) {
  if (fock_cutoff < 2)
    throw DimensionError("fock_cutoff must be >= 2, got " + std::to_string(fock_cutoff));
}

Operator::Operator(SpaceLayout layout, CMatrix entries) : layout_(layout), entries_(std::move(entries)) {
  if (entries_.rows() != layout_.total_dim() || entries_.cols() != layout_.total_dim())
    throw DimensionError("operator is " + std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()) +
                         ", layout expects " + std::to_string(layout_.total_dim()));
}

Operator Operator::zero(const SpaceLayout& layout) {
  return {layout, CMatrix::Zero(layout.total_dim(), layout.total_dim())};
}

Operator Operator::identity(const SpaceLayout& layout) {
  return {layout, CMatrix::Identity(layout.total_dim(), layout.total_dim())};
}

namespace {
void require_same_layout(const Operator& a, const Operator& b) {
  if (!(a.layout() == b.layout())) throw DimensionError("operators built on different layouts");
}
}  // namespace

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_layout(*this, rhs);
  entries_ += rhs.entries_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_layout(*this, rhs);
  entries_ -= rhs.entries_;
  return *this;
}

Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_layout(lhs, rhs);
  return {lhs.layout(), lhs.matrix() * rhs.matrix()};
}

Operator operator*(Complex s, Operator op) { return op *= s; }

StateVector::StateVector(SpaceLayout layout, CVector amplitudes)
    : layout_(layout), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.total_dim())
    throw DimensionError("state has " + std::to_string(amplitudes_.size()) + " amplitudes, layout expects " +
                         std::to_string(layout_.total_dim()));
}

StateVector StateVector::basis(const SpaceLayout& layout, int nv, int sc, int k) {
  CVector v = CVector::Zero(layout.total_dim());
  v(layout.index(nv, sc, k)) = 1.0;
  return {layout, v};
}

CMatrix expm(const CMatrix& m) {
  if (!m.allFinite()) throw NumericalError("matrix exponential of non-finite matrix");
  if (m.rows() != m.cols()) throw DimensionError("matrix exponential of non-square matrix");
  return m.exp();
}

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c x() { return (Matrix2c() << 0, 1, 1, 0).finished(); }
Matrix2c y() { return (Matrix2c() << 0, -kI, kI, 0).finished(); }
Matrix2c z() { return (Matrix2c() << 1, 0, 0, -1).finished(); }
Matrix2c plus() { return (Matrix2c() << 0, 1, 0, 0).finished(); }
Matrix2c minus() { return (Matrix2c() << 0, 0, 1, 0).finished(); }
Matrix2c up_projector() { return (Matrix2c() << 1, 0, 0, 0).finished(); }
}  // namespace pauli

CMatrix ladder(int fock_cutoff) {
  CMatrix a = CMatrix::Zero(fock_cutoff, fock_cutoff);
  for (int k = 1; k < fock_cutoff; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Operator embed(const CMatrix& op, Slot slot, const SpaceLayout& layout) {
  const int d = layout.slot_dim(slot);
  if (op.rows() != d || op.cols() != d)
    throw DimensionError("slot operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                         ", slot dimension is " + std::to_string(d));
  const CMatrix i2 = CMatrix::Identity(2, 2);
  const CMatrix in = CMatrix::Identity(layout.fock_cutoff(), layout.fock_cutoff());
  switch (slot) {
    case Slot::kNv:
      return {layout, kron(op, kron(i2, in))};
    case Slot::kSc:
      return {layout, kron(i2, kron(op, in))};
    case Slot::kResonator:
      return {layout, kron(i2, kron(i2, op))};
  }
  throw DimensionError("unknown slot");
}

Operator build_annihilation(const SpaceLayout& layout) {
  return embed(ladder(layout.fock_cutoff()), Slot::kResonator, layout);
}

Operator build_creation(const SpaceLayout& layout) { return build_annihilation(layout).adjoint(); }

Operator build_number(const SpaceLayout& layout) {
  const CMatrix a = ladder(layout.fock_cutoff());
  return embed(a.adjoint() * a, Slot::kResonator, layout);
}

SpinOps build_spin_ops(const SpaceLayout& layout, Slot slot) {
  if (slot == Slot::kResonator) throw DimensionError("spin operators need a qubit slot");
  return {embed(pauli::x(), slot, layout), embed(pauli::z(), slot, layout), embed(pauli::plus(), slot, layout),
          embed(pauli::minus(), slot, layout)};
}

Operator dagger(const Operator& op) { return op.adjoint(); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator matrix_exponential(const Operator& op, Complex scale) {
  return {op.layout(), expm(scale * op.matrix())};
}

}  // namespace hcps
