#include <gtest/gtest.h>

#include <random>

#include "siccompound/compound.hpp"
#include "siccompound/linalg.hpp"
#include "siccompound/qkd.hpp"

using namespace siccompound;

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix random_density(int n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, rng);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Vector bell_pair() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST(Linalg, InvSqrtScalar) {
  const Matrix m = 4.0 * Matrix::Identity(4, 4);
  EXPECT_TRUE(approx_equal(matrix_inv_sqrt(m), 0.5 * Matrix::Identity(4, 4)));
}

TEST(Linalg, InvSqrtDiagonal) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 4.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected(1, 1) = 0.5;
  EXPECT_TRUE(approx_equal(matrix_inv_sqrt(m), expected));
}

TEST(Linalg, InvSqrtRejectsNegative) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = -1.0;
  EXPECT_THROW(matrix_inv_sqrt(m), NotPositive);
}

TEST(Linalg, InvSqrtOnGramGivesSupportProjector) {
  const auto c = build_compound();
  Matrix t = Matrix::Zero(4, 4);
  for (int j2 = 0; j2 < 4; ++j2) t += projector(c.state(0, j2, 1));
  const Matrix s = matrix_inv_sqrt(t);
  const Matrix p = s * t * s;
  EXPECT_TRUE(approx_equal(p, support_projector(t), kDerivedTolerance));
  EXPECT_TRUE(approx_equal(p * p, p, kDerivedTolerance));
}

TEST(Linalg, EntropyPureAndMixed) {
  Vector v = Vector::Zero(3);
  v(1) = 1.0;
  EXPECT_NEAR(von_neumann_entropy(projector(v)), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(Matrix::Identity(4, 4) / 4.0), 2.0, 1e-12);
}

TEST(Linalg, EntropyOfNoisyPairState) {
  // spectrum {0.8125, 0.0125 x 15}
  const Matrix rho = family_state({0.0, 0.2});
  const RealVector ev = hermitian_eigenvalues(rho);
  EXPECT_NEAR(ev.maxCoeff(), 0.8125, 1e-12);
  EXPECT_NEAR(ev.minCoeff(), 0.0125, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(rho), 1.4287542468017431, 1e-9);
}

TEST(Linalg, EntropyRejectsBadInput) {
  EXPECT_THROW(von_neumann_entropy(Matrix::Identity(2, 2)), NotDensityMatrix);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(von_neumann_entropy(m), NotDensityMatrix);
  Matrix h = Matrix::Identity(2, 2) / 2.0;
  h(0, 1) = 1i;
  EXPECT_THROW(von_neumann_entropy(h), NotDensityMatrix);
}

TEST(Linalg, EntropyUnitarilyInvariant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = random_density(4, rng);
    const Matrix u = random_unitary(4, rng);
    EXPECT_NEAR(von_neumann_entropy(u * rho * u.adjoint(), kDerivedTolerance),
                von_neumann_entropy(rho, kDerivedTolerance), 1e-9);
  }
}

TEST(Linalg, NegativityReferenceStates) {
  Vector prod = Vector::Zero(4);
  prod(0) = 1.0;
  EXPECT_NEAR(negativity(prod, {2, 2}), 0.0, 1e-12);
  EXPECT_NEAR(negativity(bell_pair(), {2, 2}), 0.5, 1e-12);
  EXPECT_THROW(negativity(prod, {3, 2}), DimensionMismatch);
}

TEST(Linalg, NegativityOfCompoundStates) {
  const double t2 = 2.0 + std::sqrt(5.0);
  const double n2 = 5.0 + std::sqrt(5.0);
  const double expected = std::sqrt(1.0 + t2) / n2;
  EXPECT_NEAR(expected, 1.0 / std::sqrt(10.0), 1e-12);
  const auto c = build_compound();
  for (const auto& s : c.states()) EXPECT_NEAR(negativity(s, {2, 2}), expected, 1e-9);
}

TEST(Linalg, NegativityLocalUnitaryInvariant) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Vector psi(4);
    for (int i = 0; i < 4; ++i) psi(i) = Complex(g(rng), g(rng));
    psi.normalize();
    const Matrix u = tensor(random_unitary(2, rng), random_unitary(2, rng));
    EXPECT_NEAR(negativity(u * psi, {2, 2}), negativity(psi, {2, 2}), 1e-9);
  }
}

TEST(Linalg, EigenReconstruction) {
  std::mt19937_64 rng(3);
  for (int n : {2, 4, 16}) {
    const Matrix a = random_matrix(n, rng);
    const Matrix h = a + a.adjoint();
    const auto eig = hermitian_eigen(h);
    const Matrix back = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    EXPECT_TRUE(approx_equal(back, h, 1e-9));
    for (Eigen::Index i = 1; i < eig.values.size(); ++i) EXPECT_LE(eig.values(i - 1), eig.values(i));
  }
}

TEST(Linalg, TensorConventionAndMixedProduct) {
  std::mt19937_64 rng(5);
  const Matrix a = random_matrix(2, rng), b = random_matrix(3, rng), c = random_matrix(2, rng),
               d = random_matrix(3, rng), e = random_matrix(2, rng);
  EXPECT_TRUE(approx_equal(tensor(tensor(a, b), e), tensor(a, tensor(b, e)), 1e-9));
  EXPECT_TRUE(approx_equal(tensor(a, b) * tensor(c, d), tensor(Matrix(a * c), Matrix(b * d)), 1e-9));
  EXPECT_EQ(tensor(a, b)(1 * 3 + 2, 0 * 3 + 1), a(1, 0) * b(2, 1));
  Vector x(2), y(3);
  x << 1.0, 2.0;
  y << 3.0, 4.0, 5.0;
  const Vector xy = tensor(x, y);
  EXPECT_EQ(xy(4), Complex(8.0));
}

TEST(Linalg, PartialTraces) {
  std::mt19937_64 rng(9);
  const Matrix ra = random_density(2, rng), rb = random_density(3, rng);
  const Matrix rab = tensor(ra, rb);
  EXPECT_TRUE(approx_equal(partial_trace_b(rab, 2, 3), ra, 1e-12));
  EXPECT_TRUE(approx_equal(partial_trace_a(rab, 2, 3), rb, 1e-12));
}

TEST(Linalg, ShannonEntropy) {
  const std::vector<double> w{0.5, 0.25, 0.25, 0.0};
  EXPECT_NEAR(shannon_entropy(w), 1.5, 1e-15);
}
