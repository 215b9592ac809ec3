#include <gtest/gtest.h>

#include "siccompound/compound.hpp"
#include "siccompound/whgroup.hpp"

using namespace siccompound;

namespace {

const ProjectiveUnitarySet& group() {
  static const ProjectiveUnitarySet g = automorphism_group();
  return g;
}

}  // namespace

TEST(WHGroup, ClockShiftQubitIsPauli) {
  const auto rep = clock_shift_rep(2);
  EXPECT_TRUE(approx_equal(rep.X, pauli_x()));
  EXPECT_TRUE(approx_equal(rep.Z, pauli_z()));
}

TEST(WHGroup, ClockShiftQutritRelations) {
  const auto rep = clock_shift_rep(3);
  EXPECT_TRUE(approx_equal(rep.Z * rep.X, rep.omega * rep.X * rep.Z));
  EXPECT_TRUE(approx_equal(matrix_power(rep.X, 3), Matrix::Identity(3, 3)));
  EXPECT_TRUE(approx_equal(matrix_power(rep.Z, 3), Matrix::Identity(3, 3)));
  EXPECT_THROW(clock_shift_rep(1), DimensionMismatch);
}

TEST(WHGroup, CompoundRepRelations) {
  const auto rep = compound_rep_d4();
  const Matrix id = Matrix::Identity(4, 4);
  EXPECT_TRUE(is_unitary(rep.X));
  EXPECT_TRUE(is_unitary(rep.Z));
  EXPECT_TRUE(approx_equal(matrix_power(rep.X, 4), id));
  EXPECT_TRUE(approx_equal(matrix_power(rep.Z, 4), id));
  EXPECT_TRUE(approx_equal(rep.Z * rep.X, Complex(0, 1) * rep.X * rep.Z));
}

TEST(WHGroup, KleinUnitaries) {
  const auto k = klein_unitaries();
  const Matrix id = Matrix::Identity(4, 4);
  EXPECT_TRUE(approx_equal(k.U * k.U, id));
  EXPECT_TRUE(approx_equal(k.V * k.V, id));
  const auto phase = relative_phase(k.U * k.V, k.V * k.U);
  ASSERT_TRUE(phase.has_value());
  EXPECT_NEAR(std::abs(*phase - Complex(-1.0)), 0.0, 1e-12);

  const Vector phi = build_fiducial_basis()[0];
  const std::vector<Vector> basis{phi, k.U * phi, k.V * phi, k.U * k.V * phi};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      EXPECT_NEAR(std::abs(basis[a].dot(basis[b])), a == b ? 1.0 : 0.0, 1e-10);
}

TEST(WHGroup, AutomorphismGroupContainsGenerators) {
  const auto& g = group();
  const auto rep = compound_rep_d4();
  const auto k = klein_unitaries();
  for (const Matrix& m : {rep.X, rep.Z, k.U, k.V, cyclic_permutation_w()}) EXPECT_TRUE(g.contains(m));
  EXPECT_EQ(g.size(), 192u);
}

TEST(WHGroup, AutomorphismGroupClosed) {
  const auto& g = group();
  for (std::size_t a = 0; a < g.size(); a += 7)
    for (std::size_t b = 0; b < g.size(); ++b) ASSERT_TRUE(g.contains(g[a] * g[b]));
}

TEST(WHGroup, AutomorphismGroupPreservesCompound) {
  const auto& g = group();
  const auto c = build_compound();
  for (const auto& y : g.elements()) {
    std::vector<bool> hit(c.size(), false);
    for (const auto& s : c.states()) {
      const auto idx = c.find(y * s);
      ASSERT_TRUE(idx.has_value());
      hit[*idx] = true;
    }
    EXPECT_EQ(std::count(hit.begin(), hit.end(), true), 64);
  }
}

TEST(WHGroup, CanonicalizationIdempotent) {
  for (const auto& m : group().elements()) {
    EXPECT_TRUE(approx_equal(canonicalize_phase(m), m));
    EXPECT_TRUE(approx_equal(canonicalize_phase(Complex(0, 1) * m), m));
  }
}

TEST(WHGroup, ClosureCap) {
  Matrix irrational = Matrix::Identity(2, 2);
  irrational(1, 1) = std::polar(1.0, 1.0);
  EXPECT_THROW(generate_group({irrational}, 100), ClosureTooLarge);
}

TEST(WHGroup, TwinGeneratorIdentities) {
  const auto r = bipartite_identity_residuals();
  EXPECT_LE(r.x_squared, kTolerance);
  EXPECT_LE(r.z_squared, kTolerance);
  EXPECT_LE(r.x_zt, kTolerance);
  EXPECT_LE(r.z_xt, kTolerance);
  EXPECT_LE(r.xt_fourth, kTolerance);
  EXPECT_LE(r.zt_fourth, kTolerance);
  const auto t = twin_wh_generators();
  EXPECT_TRUE(is_unitary(t.Xt));
  EXPECT_TRUE(is_unitary(t.Zt));
}
