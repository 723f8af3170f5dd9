#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace hcps {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite input, non-Hermitian generator, failed commensurability, ...
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Slot { kNv = 0, kSc = 1, kResonator = 2 };

// NV qubit (x) SC qubit (x) truncated Fock mode, Fock index fastest-varying.
// Qubit basis order is (up, down): (|-1>, |0>) for the NV, (|^>, |v>) for the
// SC qubit.
class SpaceLayout {
 public:
  explicit SpaceLayout(int fock_cutoff);

  int fock_cutoff() const { return fock_cutoff_; }
  int total_dim() const { return 4 * fock_cutoff_; }
  int slot_dim(Slot slot) const { return slot == Slot::kResonator ? fock_cutoff_ : 2; }

  // Flat index of |nv, sc, k>, with nv/sc = 0 for up and 1 for down.
  int index(int nv, int sc, int k) const { return (nv * 2 + sc) * fock_cutoff_ + k; }

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;

 private:
  int fock_cutoff_;
};

class Operator {
 public:
  Operator(SpaceLayout layout, CMatrix entries);

  static Operator zero(const SpaceLayout& layout);
  static Operator identity(const SpaceLayout& layout);

  const SpaceLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }

  Operator adjoint() const { return {layout_, entries_.adjoint()}; }

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s) {
    entries_ *= s;
    return *this;
  }

 private:
  SpaceLayout layout_;
  CMatrix entries_;
};

Operator operator+(Operator lhs, const Operator& rhs);
Operator operator-(Operator lhs, const Operator& rhs);
Operator operator*(const Operator& lhs, const Operator& rhs);
Operator operator*(Complex s, Operator op);
inline Operator operator*(Operator op, Complex s) { return s * std::move(op); }

class StateVector {
 public:
  StateVector(SpaceLayout layout, CVector amplitudes);

  // |nv, sc, k> in the product basis.
  static StateVector basis(const SpaceLayout& layout, int nv, int sc, int k);

  const SpaceLayout& layout() const { return layout_; }
  const CVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

 private:
  SpaceLayout layout_;
  CVector amplitudes_;
};

// ---------------------------------------------------------------------------
// Expression-friendly matrix helpers. These work on any Eigen dense
// expression and return plain objects.

template <typename DerivedA, typename DerivedB>
CMatrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = Complex(a(i, j)) * b.template cast<Complex>();
  return out;
}

template <typename Derived>
CMatrix dagger(const Eigen::MatrixBase<Derived>& m) {
  return m.adjoint();
}

template <typename DerivedA, typename DerivedB>
CMatrix commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a * b - b * a;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

// ||U^dagger U - I||_max
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols()));
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

// exp(m) by Pade scaling-and-squaring. Throws NumericalError on non-finite input.
CMatrix expm(const CMatrix& m);

// ---------------------------------------------------------------------------
// Single-slot primitives and embedding.

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
Matrix2c plus();   // |up><down|
Matrix2c minus();  // |down><up|
Matrix2c up_projector();
}  // namespace pauli

// Truncated ladder operator on the Fock space: <k-1|a|k> = sqrt(k).
CMatrix ladder(int fock_cutoff);

// Identity on all other slots. Throws DimensionError if op does not match the slot.
Operator embed(const CMatrix& op, Slot slot, const SpaceLayout& layout);

Operator build_annihilation(const SpaceLayout& layout);
Operator build_creation(const SpaceLayout& layout);
Operator build_number(const SpaceLayout& layout);

struct SpinOps {
  Operator x;
  Operator z;
  Operator plus;
  Operator minus;
};

// Throws DimensionError when slot is the resonator.
SpinOps build_spin_ops(const SpaceLayout& layout, Slot slot);

Operator dagger(const Operator& op);
Operator commutator(const Operator& a, const Operator& b);

// exp(scale * op); relative error below 1e-12 for ||scale * op|| <= 10.
Operator matrix_exponential(const Operator& op, Complex scale);

}  // namespace hcps
