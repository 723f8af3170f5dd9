#include "hcps/hilbert.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hcps;

namespace {

CMatrix random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

}  // namespace

TEST(SpaceLayout, RejectsTinyCutoff) {
  EXPECT_THROW(SpaceLayout(1), DimensionError);
  EXPECT_EQ(SpaceLayout(2).total_dim(), 8);
}

TEST(SpaceLayout, FockIndexVariesFastest) {
  const SpaceLayout l(5);
  EXPECT_EQ(l.index(0, 0, 3), 3);
  EXPECT_EQ(l.index(0, 1, 0), 5);
  EXPECT_EQ(l.index(1, 0, 0), 10);
  EXPECT_EQ(l.index(1, 1, 4), 19);
}

TEST(Operator, MismatchedLayoutsThrow) {
  const Operator a = Operator::identity(SpaceLayout(3));
  const Operator b = Operator::identity(SpaceLayout(4));
  EXPECT_THROW(a + b, DimensionError);
  EXPECT_THROW(a * b, DimensionError);
  EXPECT_THROW(Operator(SpaceLayout(3), CMatrix::Identity(5, 5)), DimensionError);
}

TEST(Ladder, EntriesAreSquareRoots) {
  const Operator a2 = build_annihilation(SpaceLayout(2));
  const SpaceLayout l2(2);
  EXPECT_DOUBLE_EQ(a2.matrix()(l2.index(0, 0, 0), l2.index(0, 0, 1)).real(), 1.0);
  EXPECT_EQ((a2.matrix().array() != Complex(0.0, 0.0)).count(), 4);  // one per qubit block

  const SpaceLayout l4(4);
  const Operator a4 = build_annihilation(l4);
  EXPECT_NEAR(a4.matrix()(l4.index(1, 0, 2), l4.index(1, 0, 3)).real(), 1.7320508075688772, 1e-15);
}

TEST(Ladder, CanonicalCommutatorBelowTopLevel) {
  const SpaceLayout l(6);
  const CMatrix a = ladder(6);
  const CMatrix c = commutator(a, a.adjoint());
  EXPECT_LT(max_abs(c.topLeftCorner(5, 5) - CMatrix::Identity(5, 5)), 1e-14);
  EXPECT_NEAR(c(5, 5).real(), -5.0, 1e-14);  // truncation artifact at the top level

  const Operator n = build_number(l);
  const Operator an = build_creation(l) * build_annihilation(l);
  EXPECT_EQ(max_abs(n.matrix() - an.matrix()), 0.0);
}

TEST(SpinOps, PauliIdentities) {
  const SpaceLayout l(3);
  const CMatrix id = CMatrix::Identity(l.total_dim(), l.total_dim());
  for (Slot s : {Slot::kNv, Slot::kSc}) {
    const SpinOps ops = build_spin_ops(l, s);
    EXPECT_LT(max_abs(ops.x.matrix() * ops.x.matrix() - id), 1e-15);
    const CMatrix anti = ops.plus.matrix() * ops.minus.matrix() + ops.minus.matrix() * ops.plus.matrix();
    EXPECT_LT(max_abs(anti - id), 1e-15);
  }
  EXPECT_THROW(build_spin_ops(l, Slot::kResonator), DimensionError);
}

TEST(SpinOps, DistinctSlotsCommute) {
  const SpaceLayout l(3);
  const SpinOps nv = build_spin_ops(l, Slot::kNv);
  const SpinOps sc = build_spin_ops(l, Slot::kSc);
  EXPECT_EQ(max_abs(commutator(nv.x, sc.x).matrix()), 0.0);
  EXPECT_EQ(max_abs(commutator(nv.z, sc.x).matrix()), 0.0);
  EXPECT_EQ(max_abs(commutator(nv.x, build_annihilation(l)).matrix()), 0.0);
}

TEST(Embed, IdentityAndSlotPlacement) {
  const SpaceLayout l(4);
  EXPECT_EQ(max_abs(embed(pauli::identity(), Slot::kNv, l).matrix() - CMatrix::Identity(16, 16)), 0.0);
  // sigma_z on the SC slot: sign by the SC index only.
  const CMatrix z = embed(pauli::z(), Slot::kSc, l).matrix();
  EXPECT_DOUBLE_EQ(z(l.index(1, 0, 2), l.index(1, 0, 2)).real(), 1.0);
  EXPECT_DOUBLE_EQ(z(l.index(1, 1, 2), l.index(1, 1, 2)).real(), -1.0);
  EXPECT_THROW(embed(pauli::x(), Slot::kResonator, l), DimensionError);
}

TEST(Kron, AssociativeOnThreeQubits) {
  const CMatrix a = random_matrix(2, 1), b = random_matrix(2, 2), c = random_matrix(2, 3);
  const CMatrix left = kron(kron(a, b), c);
  const CMatrix right = kron(a, kron(b, c));
  EXPECT_LT(max_abs(left - right), 1e-14);
  // Entry oracle: (a (x) b (x) c)_{ijk,lmn} = a_il b_jm c_kn.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
              EXPECT_LT(std::abs(left(4 * i + 2 * j + k, 4 * l + 2 * m + n) - a(i, l) * b(j, m) * c(k, n)), 1e-14);
}

TEST(Dagger, Involution) {
  const Operator m(SpaceLayout(2), random_matrix(8, 7));
  EXPECT_EQ(max_abs(dagger(dagger(m)).matrix() - m.matrix()), 0.0);
}

TEST(MatrixExponential, ZeroAndPauliRotation) {
  const SpaceLayout l(2);
  EXPECT_LT(max_abs(matrix_exponential(Operator::zero(l), 1.0).matrix() - CMatrix::Identity(8, 8)), 1e-15);

  const double theta = kPi / 3.0;
  const Operator sx = build_spin_ops(l, Slot::kSc).x;
  const CMatrix u = matrix_exponential(sx, -kI * theta).matrix();
  const CMatrix expected = std::cos(theta) * CMatrix::Identity(8, 8) - kI * std::sin(theta) * sx.matrix();
  EXPECT_LT(max_abs(u - expected), 1e-14);
}

TEST(MatrixExponential, AntiHermitianGivesUnitary) {
  const CMatrix r = random_matrix(8, 42);
  const CMatrix anti = r - r.adjoint();
  EXPECT_LT(unitarity_defect(expm(anti)), 1e-12);
}

TEST(MatrixExponential, RejectsNonFinite) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(m), NumericalError);
}

TEST(StateVector, BasisAndNormCheck) {
  const SpaceLayout l(3);
  const StateVector s = StateVector::basis(l, 1, 0, 2);
  EXPECT_EQ(s.amplitudes()(l.index(1, 0, 2)), Complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_THROW(StateVector(l, CVector::Zero(5)), DimensionError);
}
