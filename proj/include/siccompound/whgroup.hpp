#pragma once

// Weyl-Heisenberg group representations, the Klein unitaries that build the
// d = 4 compound, its automorphism group (modulo phase), and the twin
// Heisenberg generators that expose the bipartite Pauli group inside it.

#include <cmath>
#include <cstddef>
#include <deque>
#include <numbers>
#include <optional>
#include <vector>

#include "siccompound/linalg.hpp"

namespace siccompound {

/// A pair of generators with X^d = Z^d = 1 and Z X = omega X Z.
struct WHRep {
  int dim = 0;
  Matrix X;
  Matrix Z;
  Complex omega;

  /// X^{j1} Z^{j2}
  Matrix displacement(int j1, int j2) const { return matrix_power(X, j1) * matrix_power(Z, j2); }
};

inline Complex root_of_unity(int d) {
  return std::polar(1.0, 2.0 * std::numbers::pi / d);
}

/// Shift X|k> = |k+1 mod d> and clock Z|k> = omega^k |k>.
inline WHRep clock_shift_rep(int d) {
  if (d < 2) throw DimensionMismatch("clock_shift_rep needs d >= 2");
  WHRep rep{d, Matrix::Zero(d, d), Matrix::Zero(d, d), root_of_unity(d)};
  for (int k = 0; k < d; ++k) {
    rep.X((k + 1) % d, k) = 1.0;
    rep.Z(k, k) = std::pow(rep.omega, k);
  }
  return rep;
}

inline Complex eighth_root() { return std::polar(1.0, std::numbers::pi / 4.0); }

/// The d = 4 representation in which the compound fiducial takes the form (t, i, i, i)/n.
inline WHRep compound_rep_d4() {
  WHRep rep{4, Matrix(4, 4), Matrix(4, 4), 1i};
  // clang-format off
  rep.X << 0,  1i, 0,  0,
           -1, 0,  0,  0,
           0,  0,  0,  1,
           0,  0,  1i, 0;
  rep.Z << 0,  0,  -1, 0,
           0,  0,  0,  1,
           1i, 0,  0,  0,
           0,  1i, 0,  0;
  // clang-format on
  rep.X *= eighth_root();
  rep.Z *= eighth_root();
  return rep;
}

struct KleinPair {
  Matrix U;
  Matrix V;
};

/// Projective Klein four-group used to rotate the fiducial into an orthonormal basis.
inline KleinPair klein_unitaries() {
  KleinPair k{Matrix(4, 4), Matrix(4, 4)};
  // clang-format off
  k.U << 0, 0,   1, 0,
         0, 0,   0, 1i,
         1, 0,   0, 0,
         0, -1i, 0, 0;
  k.V << 0, 1, 0,  0,
         1, 0, 0,  0,
         0, 0, 0,  -1i,
         0, 0, 1i, 0;
  // clang-format on
  return k;
}

/// Permutation fixing component 0 and cycling 1 -> 2 -> 3 -> 1.
inline Matrix cyclic_permutation_w() {
  Matrix w = Matrix::Zero(4, 4);
  w(0, 0) = 1.0;
  w(2, 1) = 1.0;
  w(3, 2) = 1.0;
  w(1, 3) = 1.0;
  return w;
}

/// If a ~ phase * b, returns the phase.
inline std::optional<Complex> relative_phase(const Matrix& a, const Matrix& b,
                                             double tol = kTolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::nullopt;
  const Complex inner = (b.adjoint() * a).trace();
  const double norm_b = b.squaredNorm();
  if (norm_b == 0.0 || std::abs(inner) <= tol) return std::nullopt;
  const Complex phase = inner / std::abs(inner);
  if (max_abs(a - phase * b) > tol) return std::nullopt;
  return phase;
}

/// Multiplies m by a global phase so that its first nonzero entry, scanning
/// column-major, is real and positive.
inline Matrix canonicalize_phase(const Matrix& m, double tol = kTolerance) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex e = m(r, c);
      if (std::abs(e) > tol) return m * (std::conj(e) / std::abs(e));
    }
  }
  return m;
}

/// Finite set of unitaries, one canonical representative per projective class.
class ProjectiveUnitarySet {
 public:
  explicit ProjectiveUnitarySet(int dim) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<Matrix>& elements() const noexcept { return elements_; }
  const Matrix& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> find(const Matrix& m, double tol = kTolerance) const {
    const Matrix c = canonicalize_phase(m, tol);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (approx_equal(elements_[i], c, tol)) return i;
    }
    return std::nullopt;
  }

  bool contains(const Matrix& m, double tol = kTolerance) const { return find(m, tol).has_value(); }

  /// Inserts the canonical form of m unless present; returns true on insertion.
  bool insert(const Matrix& m, double tol = kTolerance) {
    if (m.rows() != dim_ || m.cols() != dim_) throw DimensionMismatch("unitary has wrong size");
    if (contains(m, tol)) return false;
    elements_.push_back(canonicalize_phase(m, tol));
    return true;
  }

 private:
  int dim_;
  std::vector<Matrix> elements_;
};

inline constexpr std::size_t kClosureCap = 65536;

/// Breadth-first closure of the generators under multiplication modulo phase.
inline ProjectiveUnitarySet generate_group(const std::vector<Matrix>& generators,
                                           std::size_t cap = kClosureCap) {
  if (generators.empty()) throw DimensionMismatch("no generators");
  const int dim = static_cast<int>(generators.front().rows());
  ProjectiveUnitarySet group(dim);
  group.insert(Matrix::Identity(dim, dim));
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const Matrix current = group[frontier.front()];
    frontier.pop_front();
    for (const auto& g : generators) {
      if (group.insert(g * current)) {
        if (group.size() > cap) {
          throw ClosureTooLarge("closure exceeded " + std::to_string(cap) + " elements");
        }
        frontier.push_back(group.size() - 1);
      }
    }
  }
  return group;
}

/// Symmetry group of the d = 4 compound generated by X, Z, U, V and W.
inline ProjectiveUnitarySet automorphism_group() {
  const auto rep = compound_rep_d4();
  const auto klein = klein_unitaries();
  return generate_group({rep.X, rep.Z, klein.U, klein.V, cyclic_permutation_w()});
}

struct TwinGenerators {
  Matrix Xt;
  Matrix Zt;
};

/// Generators of the second normal copy of the Weyl-Heisenberg group in the d = 4 Clifford group.
inline TwinGenerators twin_wh_generators() {
  TwinGenerators t{Matrix(4, 4), Matrix(4, 4)};
  // clang-format off
  t.Xt << 0,   0,  0,  -1,
          0,   0,  -1, 0,
          0,   1i, 0,  0,
          -1i, 0,  0,  0;
  t.Zt << 0,  0, -1, 0,
          0,  0, 0,  1i,
          1i, 0, 0,  0,
          0,  1, 0,  0;
  // clang-format on
  t.Xt *= eighth_root();
  t.Zt *= eighth_root();
  return t;
}

/// Entrywise residuals of the four identities that embed the bipartite
/// Heisenberg group: X^2 = sz(x)1, Z^2 = 1(x)sz, -i X Zt = sy(x)sy, Z Xt = 1(x)sx.
struct BipartiteIdentityResiduals {
  double x_squared = 0.0;
  double z_squared = 0.0;
  double x_zt = 0.0;
  double z_xt = 0.0;
  double xt_fourth = 0.0;
  double zt_fourth = 0.0;

  double worst() const {
    return std::max({x_squared, z_squared, x_zt, z_xt, xt_fourth, zt_fourth});
  }
};

inline BipartiteIdentityResiduals bipartite_identity_residuals() {
  const auto rep = compound_rep_d4();
  const auto twin = twin_wh_generators();
  const Matrix id2 = Matrix::Identity(2, 2);
  const Matrix id4 = Matrix::Identity(4, 4);
  BipartiteIdentityResiduals r;
  r.x_squared = max_abs(rep.X * rep.X - tensor(pauli_z(), id2));
  r.z_squared = max_abs(rep.Z * rep.Z - tensor(id2, pauli_z()));
  r.x_zt = max_abs(-1i * rep.X * twin.Zt - tensor(pauli_y(), pauli_y()));
  r.z_xt = max_abs(rep.Z * twin.Xt - tensor(id2, pauli_x()));
  r.xt_fourth = max_abs(matrix_power(twin.Xt, 4) - id4);
  r.zt_fourth = max_abs(matrix_power(twin.Zt, 4) - id4);
  return r;
}

}  // namespace siccompound
