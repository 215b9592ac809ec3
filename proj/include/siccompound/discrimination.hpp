#pragma once

// State discrimination on sub-ensembles of the d = 4 compound. The pretty good
// measurement for each Latin-square row is an orthonormal basis; the four rows
// together with the computational basis give a complete set of five MUBs.

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "siccompound/compound.hpp"
#include "siccompound/linalg.hpp"

namespace siccompound {

struct OrthonormalBasis {
  std::vector<Vector> vectors;

  int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }

  bool is_orthonormal(double tol = kDerivedTolerance) const {
    for (std::size_t a = 0; a < vectors.size(); ++a)
      for (std::size_t b = a; b < vectors.size(); ++b) {
        const double target = a == b ? 1.0 : 0.0;
        if (std::abs(std::abs(vectors[a].dot(vectors[b])) - target) > tol) return false;
      }
    return static_cast<int>(vectors.size()) == dim();
  }

  static OrthonormalBasis computational(int d) {
    OrthonormalBasis b;
    for (int i = 0; i < d; ++i) b.vectors.push_back(Vector::Unit(d, i));
    return b;
  }
};

/// True when every vector of a equals some distinct vector of b up to phase.
inline bool same_basis_mod_phase(const OrthonormalBasis& a, const OrthonormalBasis& b,
                                 double tol = kDerivedTolerance) {
  if (a.vectors.size() != b.vectors.size()) return false;
  std::vector<bool> used(b.vectors.size(), false);
  for (const auto& v : a.vectors) {
    bool matched = false;
    for (std::size_t j = 0; j < b.vectors.size(); ++j) {
      if (!used[j] && std::abs(std::abs(v.dot(b.vectors[j])) - 1.0) <= tol) {
        used[j] = matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

/// Largest deviation of |<a|b>|^2 from 1/d over all cross pairs.
inline double unbiasedness_deviation(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  const double target = 1.0 / a.dim();
  double worst = 0.0;
  for (const auto& u : a.vectors)
    for (const auto& v : b.vectors) worst = std::max(worst, std::abs(overlap2(u, v) - target));
  return worst;
}

struct MubFamily {
  std::vector<OrthonormalBasis> bases;

  /// Worst cross-pair deviation over all pairs of distinct bases.
  double worst_deviation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < bases.size(); ++i)
      for (std::size_t j = i + 1; j < bases.size(); ++j)
        worst = std::max(worst, unbiasedness_deviation(bases[i], bases[j]));
    return worst;
  }

  std::size_t cross_pair_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < bases.size(); ++i)
      for (std::size_t j = i + 1; j < bases.size(); ++j)
        count += bases[i].vectors.size() * bases[j].vectors.size();
    return count;
  }
};

/// The four states {psi_(j1,j2),k}_{j1} of one Latin-square block.
inline std::vector<Vector> latin_block(const SicCompound& c, int j2, int k) {
  std::vector<Vector> out;
  for (int j1 = 0; j1 < 4; ++j1) out.push_back(c.state(from_latin({j1, j2, k})));
  return out;
}

/// Square-root measurement T^{-1/2}|psi> of a linearly independent pure-state ensemble.
inline OrthonormalBasis pretty_good_basis(std::span<const Vector> states) {
  if (states.empty()) throw DimensionMismatch("empty ensemble");
  const auto d = states.front().size();
  Matrix gram = Matrix::Zero(d, d);
  for (const auto& s : states) gram += projector(s);
  const double smallest = hermitian_eigenvalues(gram).minCoeff();
  if (smallest < kTolerance) {
    throw SingularGram("Gram operator has eigenvalue " + std::to_string(smallest));
  }
  const Matrix inv_sqrt = matrix_inv_sqrt(gram);
  OrthonormalBasis out;
  for (const auto& s : states) {
    Vector xi = inv_sqrt * s;
    out.vectors.push_back(xi / xi.norm());
  }
  return out;
}

inline OrthonormalBasis pretty_good_basis(const SicCompound& c, int j2, int k) {
  if (c.dim() != 4 || j2 < 0 || j2 > 3 || k < 0 || k > 3) {
    throw DimensionMismatch("pretty_good_basis expects the d = 4 compound and indices in [0,3]");
  }
  const auto block = latin_block(c, j2, k);
  return pretty_good_basis(block);
}

/// Four PGM bases (one per Latin-square row) followed by the computational basis.
inline MubFamily extract_mubs(const SicCompound& c, double tol = kDerivedTolerance) {
  MubFamily family;
  for (int j2 = 0; j2 < 4; ++j2) family.bases.push_back(pretty_good_basis(c, j2, 0));
  family.bases.push_back(OrthonormalBasis::computational(4));
  for (std::size_t i = 0; i < family.bases.size(); ++i)
    for (std::size_t j = i + 1; j < family.bases.size(); ++j) {
      const double dev = unbiasedness_deviation(family.bases[i], family.bases[j]);
      if (dev > tol) {
        throw UnbiasednessViolation("bases " + std::to_string(i) + " and " + std::to_string(j) +
                                    " deviate by " + std::to_string(dev));
      }
    }
  return family;
}

/// sum_i p_i <psi_i|Pi_i|psi_i>
inline double success_probability(std::span<const Matrix> rhos, std::span<const double> priors,
                                  const OrthonormalBasis& povm) {
  if (rhos.size() != priors.size() || rhos.size() != povm.vectors.size()) {
    throw DimensionMismatch("ensemble and measurement sizes differ");
  }
  double p = 0.0;
  for (std::size_t i = 0; i < rhos.size(); ++i)
    p += priors[i] * povm.vectors[i].dot(rhos[i] * povm.vectors[i]).real();
  return p;
}

inline std::vector<Matrix> as_density_matrices(std::span<const Vector> states) {
  std::vector<Matrix> out;
  for (const auto& s : states) out.push_back(projector(s));
  return out;
}

struct OptimalityCheck {
  bool optimal = false;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;  // smallest eigenvalue over all Gamma - p_i rho_i
};

inline constexpr double kOptimalityEigenTolerance = 1e-8;

/// Minimum-error conditions: Gamma = sum p_i Pi_i rho_i Hermitian and Gamma - p_i rho_i >= 0.
inline OptimalityCheck check_min_error_optimality(std::span<const Matrix> rhos,
                                                  std::span<const double> priors,
                                                  const OrthonormalBasis& povm) {
  const std::size_t n = rhos.size();
  if (priors.size() != n || povm.vectors.size() != n) {
    throw DimensionMismatch("ensemble and measurement sizes differ");
  }
  const auto d = rhos.front().rows();
  for (const auto& r : rhos)
    if (r.rows() != d) throw DimensionMismatch("states of different dimension");
  if (povm.dim() != d) throw DimensionMismatch("measurement dimension differs from states");

  Matrix gamma = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) gamma += priors[i] * projector(povm.vectors[i]) * rhos[i];
  OptimalityCheck out;
  out.hermiticity_defect = max_abs(gamma - gamma.adjoint());
  const Matrix sym = 0.5 * (gamma + gamma.adjoint());
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out.min_eigenvalue =
        std::min(out.min_eigenvalue, hermitian_eigenvalues(sym - priors[i] * rhos[i]).minCoeff());
  }
  out.optimal = out.hermiticity_defect <= kTolerance &&
                out.min_eigenvalue >= -kOptimalityEigenTolerance;
  return out;
}

inline bool verify_min_error_optimality(std::span<const Matrix> rhos,
                                        std::span<const double> priors,
                                        const OrthonormalBasis& povm) {
  return check_min_error_optimality(rhos, priors, povm).optimal;
}

inline bool verify_min_error_optimality(std::span<const Vector> states,
                                        std::span<const double> priors,
                                        const OrthonormalBasis& povm) {
  const auto rhos = as_density_matrices(states);
  return verify_min_error_optimality(std::span<const Matrix>(rhos), priors, povm);
}

/// Reorders the basis so that element i is assigned to ensemble member i,
/// choosing the assignment with the largest success probability.
inline OrthonormalBasis best_assignment(std::span<const Matrix> rhos,
                                        std::span<const double> priors,
                                        const OrthonormalBasis& basis) {
  std::vector<std::size_t> perm(basis.vectors.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  OrthonormalBasis best;
  double best_p = -1.0;
  do {
    OrthonormalBasis candidate;
    for (std::size_t i : perm) candidate.vectors.push_back(basis.vectors[i]);
    const double p = success_probability(rhos, priors, candidate);
    if (p > best_p + 1e-12) {
      best_p = p;
      best = std::move(candidate);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Mixed states rho_{j2} = 1/4 sum_{j1} |psi><psi| of one Latin-square column.
inline std::vector<Matrix> row_ensemble(const SicCompound& c, int k) {
  std::vector<Matrix> out;
  for (int j2 = 0; j2 < 4; ++j2) {
    Matrix rho = Matrix::Zero(4, 4);
    for (const auto& s : latin_block(c, j2, k)) rho += 0.25 * projector(s);
    out.push_back(rho);
  }
  return out;
}

}  // namespace siccompound
