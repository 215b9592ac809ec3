#pragma once

// Dense complex linear algebra shared by every module: Kronecker products,
// Hermitian eigendecomposition, inverse square roots, entropies and negativity.
//
// Tensor convention: the index of the pair (i, j) in A (x) B is i * dim(B) + j.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "siccompound/error.hpp"

namespace siccompound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

using namespace std::complex_literals;

/// Tolerance for structural predicates (Hermitian, unitary, positive).
inline constexpr double kTolerance = 1e-10;
/// Tolerance for derived equalities that pass through an eigendecomposition.
inline constexpr double kDerivedTolerance = 1e-9;

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol = kTolerance) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs(a - b) <= tol;
}

inline bool is_hermitian(const Matrix& m, double tol = kTolerance) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kTolerance) {
  return m.rows() == m.cols() &&
         max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

inline bool is_normalized(const Vector& v, double tol = kTolerance) {
  return std::abs(v.norm() - 1.0) <= tol;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

/// |<a|b>|^2
inline double overlap2(const Vector& a, const Vector& b) { return std::norm(a.dot(b)); }

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

inline Matrix matrix_power(const Matrix& m, int exponent) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < exponent; ++i) out = out * m;
  return out;
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;  // columns are eigenvectors
};

inline HermitianEigen hermitian_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("hermitian_eigen expects a square matrix");
  }
  // Symmetrise so round-off in the lower triangle cannot leak into the result.
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline bool is_positive_semidefinite(const Matrix& m, double tol = kTolerance) {
  return is_hermitian(m, tol) && hermitian_eigenvalues(m).minCoeff() >= -tol;
}

/// Pseudo-inverse square root on the support; eigenvalues below tolerance count as zero.
inline Matrix matrix_inv_sqrt(const Matrix& m, double tol = kTolerance) {
  if (!is_hermitian(m, tol)) throw NotPositive("matrix is not Hermitian");
  const auto eig = hermitian_eigen(m);
  RealVector scale(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda < -tol) {
      throw NotPositive("eigenvalue " + std::to_string(lambda) + " is negative");
    }
    scale(i) = lambda <= tol ? 0.0 : 1.0 / std::sqrt(lambda);
  }
  return eig.vectors * scale.asDiagonal() * eig.vectors.adjoint();
}

inline Matrix support_projector(const Matrix& m, double tol = kTolerance) {
  const auto eig = hermitian_eigen(m);
  RealVector mask = (eig.values.array() > tol).cast<double>();
  return eig.vectors * mask.asDiagonal() * eig.vectors.adjoint();
}

/// Shannon entropy in bits of a nonnegative weight vector; weights are not renormalised.
inline double shannon_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

/// -sum lambda log2 lambda over the spectrum of a positive operator (no trace check).
inline double spectral_entropy(const Matrix& m) {
  const RealVector values = hermitian_eigenvalues(m);
  double h = 0.0;
  for (double lambda : values) {
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  }
  return h;
}

inline double von_neumann_entropy(const Matrix& rho, double tol = kTolerance) {
  if (!is_hermitian(rho, tol)) throw NotDensityMatrix("not Hermitian");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > tol) {
    throw NotDensityMatrix("trace " + std::to_string(trace) + " differs from 1");
  }
  const RealVector values = hermitian_eigenvalues(rho);
  if (values.minCoeff() < -tol) {
    throw NotDensityMatrix("eigenvalue " + std::to_string(values.minCoeff()) + " is negative");
  }
  double h = 0.0;
  for (double lambda : values) {
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  }
  return h;
}

/// Partial transpose on the second factor of a (dim_a * dim_b)-dimensional operator.
inline Matrix partial_transpose_b(const Matrix& rho, int dim_a, int dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b) {
    throw DimensionMismatch("operator size does not match dims");
  }
  Matrix out(rho.rows(), rho.cols());
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k)
        for (int l = 0; l < dim_b; ++l)
          out(i * dim_b + l, k * dim_b + j) = rho(i * dim_b + j, k * dim_b + l);
  return out;
}

inline double trace_norm_hermitian(const Matrix& m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

/// Negativity (||rho^{T_B}||_1 - 1) / 2 of a pure state.
inline double negativity(const Vector& psi, std::pair<int, int> dims) {
  if (psi.size() != dims.first * dims.second) {
    throw DimensionMismatch("state dimension " + std::to_string(psi.size()) +
                            " does not match " + std::to_string(dims.first) + "x" +
                            std::to_string(dims.second));
  }
  const Matrix pt = partial_transpose_b(projector(psi), dims.first, dims.second);
  return 0.5 * (trace_norm_hermitian(pt) - 1.0);
}

/// Partial trace over one factor of a bipartite operator.
inline Matrix partial_trace_a(const Matrix& rho, int dim_a, int dim_b) {
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_a; ++i) out += rho.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

inline Matrix partial_trace_b(const Matrix& rho, int dim_a, int dim_b) {
  Matrix out(dim_a, dim_a);
  for (int i = 0; i < dim_a; ++i)
    for (int k = 0; k < dim_a; ++k)
      out(i, k) = rho.block(i * dim_b, k * dim_b, dim_b, dim_b).trace();
  return out;
}

/// Pauli matrices sigma_x, sigma_y, sigma_z.
inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -1i, 1i, 0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace siccompound
