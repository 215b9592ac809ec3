#pragma once

// Prepare-and-measure functionals that certify SICs (S', S) and SIC-compounds
// (H), the quantum bound they share, and a see-saw maximiser for H.
//
// A model runs `copies` games in parallel. Copy r owns preparations
// states[r][x] for x in [d^2], one binary measurement binary[r][pair] per
// pair y < y' (the stored operator is the b = 1 element, b = 2 is its
// complement) and one d^2-outcome measurement tomographic[r][o].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "siccompound/compound.hpp"
#include "siccompound/linalg.hpp"

namespace siccompound {

struct PrepareMeasureModel {
  int dim = 0;
  std::vector<std::vector<Matrix>> states;
  std::vector<std::vector<Matrix>> binary;
  std::vector<std::vector<Matrix>> tomographic;

  int inputs() const { return dim * dim; }
  int copies() const { return static_cast<int>(states.size()); }
};

/// Pairs (y, y') with y < y' in lexicographic order.
inline std::vector<std::pair<int, int>> input_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < n; ++y)
    for (int yp = y + 1; yp < n; ++yp) out.emplace_back(y, yp);
  return out;
}

/// Throws InvalidModel unless all shapes agree and every measurement is a POVM.
inline void validate_model(const PrepareMeasureModel& m, double tol = kTolerance) {
  const int d = m.dim;
  const int n = m.inputs();
  const auto pairs = static_cast<std::size_t>(n * (n - 1) / 2);
  if (d < 2) throw InvalidModel("dimension below 2");
  if (m.copies() < 1 || m.binary.size() != m.states.size() ||
      m.tomographic.size() != m.states.size()) {
    throw InvalidModel("copy counts disagree");
  }
  const Matrix id = Matrix::Identity(d, d);
  auto check_op = [&](const Matrix& op, const std::string& what) {
    if (op.rows() != d || op.cols() != d) throw InvalidModel(what + " has wrong size");
    if (!is_positive_semidefinite(op, tol)) throw InvalidModel(what + " is not positive");
  };
  for (int r = 0; r < m.copies(); ++r) {
    if (static_cast<int>(m.states[r].size()) != n) throw InvalidModel("wrong preparation count");
    for (const auto& rho : m.states[r]) {
      check_op(rho, "preparation");
      if (std::abs(rho.trace().real() - 1.0) > tol) throw InvalidModel("preparation trace != 1");
    }
    if (m.binary[r].size() != pairs) throw InvalidModel("wrong binary measurement count");
    for (const auto& b : m.binary[r]) {
      check_op(b, "binary element");
      check_op(id - b, "binary complement");
    }
    if (static_cast<int>(m.tomographic[r].size()) != n) throw InvalidModel("wrong outcome count");
    Matrix total = Matrix::Zero(d, d);
    for (const auto& e : m.tomographic[r]) {
      check_op(e, "tomographic element");
      total += e;
    }
    if (max_abs(total - id) > tol) throw InvalidModel("tomographic elements do not sum to 1");
  }
}

inline double born(const Matrix& effect, const Matrix& rho) {
  return (effect * rho).trace().real();
}

namespace detail {

inline double s_prime_unchecked(const PrepareMeasureModel& m, int r) {
  const auto pairs = input_pairs(m.inputs());
  double s = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [y, yp] = pairs[p];
    const Matrix& e = m.binary[r][p];
    s += born(e, m.states[r][y]) + 1.0 - born(e, m.states[r][yp]);
  }
  return s;
}

inline double guess_unchecked(const PrepareMeasureModel& m, int r) {
  double s = 0.0;
  for (int x = 0; x < m.inputs(); ++x) s += born(m.tomographic[r][x], m.states[r][x]);
  return s;
}

inline double penalty_unchecked(const PrepareMeasureModel& m) {
  double pen = 0.0;
  for (int x = 0; x < m.inputs(); ++x)
    for (int i = 0; i < m.copies(); ++i)
      for (int z = 0; z < m.copies(); ++z)
        if (z != i) pen += born(m.tomographic[z][x], m.states[i][x]);
  return pen;
}

inline double h_unchecked(const PrepareMeasureModel& m) {
  double mean = 0.0;
  for (int r = 0; r < m.copies(); ++r) mean += s_prime_unchecked(m, r) + guess_unchecked(m, r);
  return mean / m.dim - penalty_unchecked(m);
}

}  // namespace detail

inline double eval_S_prime(const PrepareMeasureModel& m, int copy = 0) {
  validate_model(m);
  return detail::s_prime_unchecked(m, copy);
}

inline double eval_S(const PrepareMeasureModel& m, int copy = 0) {
  validate_model(m);
  return detail::s_prime_unchecked(m, copy) + detail::guess_unchecked(m, copy);
}

/// sum over x and i != z of p(o = x | (x, i), z)
inline double eval_penalty(const PrepareMeasureModel& m) {
  validate_model(m);
  return detail::penalty_unchecked(m);
}

inline double eval_H(const PrepareMeasureModel& m) {
  validate_model(m);
  if (m.copies() != m.dim) throw InvalidModel("H needs d parallel copies");
  return detail::h_unchecked(m);
}

/// 1/2 sqrt(d^5 (d-1)^2 (d+1)) + C(d^2, 2) + d
inline double analytic_bound(int d) {
  const double dd = d;
  return 0.5 * std::sqrt(std::pow(dd, 5) * (dd - 1) * (dd - 1) * (dd + 1)) +
         dd * dd * (dd * dd - 1) / 2.0 + dd;
}

/// Semidefinite upper bound for three orthogonal qubit SICs; reference value only.
inline constexpr double kQubitThreeSicSdpBound = 12.728;

/// Projector onto the strictly positive eigenspace.
inline Matrix positive_part_projector(const Matrix& h) {
  const auto eig = hermitian_eigen(h);
  RealVector mask = (eig.values.array() > 0.0).cast<double>();
  return eig.vectors * mask.asDiagonal() * eig.vectors.adjoint();
}

inline Matrix top_eigenprojector(const Matrix& h) {
  const auto eig = hermitian_eigen(h);
  const Vector v = eig.vectors.col(eig.values.size() - 1);
  return projector(v);
}

/// Helstrom measurement for each pair: projector onto the positive part of rho_y - rho_y'.
inline std::vector<Matrix> helstrom_measurements(const std::vector<Matrix>& states) {
  std::vector<Matrix> out;
  for (const auto& [y, yp] : input_pairs(static_cast<int>(states.size())))
    out.push_back(positive_part_projector(states[y] - states[yp]));
  return out;
}

/// Square-root measurement T^{-1/2} rho_x T^{-1/2}, completed on the kernel of T.
inline std::vector<Matrix> square_root_measurement(const std::vector<Matrix>& states) {
  const auto d = states.front().rows();
  Matrix t = Matrix::Zero(d, d);
  for (const auto& s : states) t += s;
  const Matrix inv = matrix_inv_sqrt(t);
  std::vector<Matrix> out;
  for (const auto& s : states) out.push_back(inv * s * inv);
  const Matrix kernel = Matrix::Identity(d, d) - support_projector(t);
  if (max_abs(kernel) > kTolerance) out.front() += kernel;
  return out;
}

/// The single SIC game with Helstrom binaries and the aligned SIC-POVM.
inline PrepareMeasureModel sic_game_model(const std::vector<Vector>& sic) {
  PrepareMeasureModel m;
  m.dim = static_cast<int>(sic.front().size());
  std::vector<Matrix> rhos, povm;
  for (const auto& v : sic) {
    rhos.push_back(projector(v));
    povm.push_back(projector(v) / m.dim);
  }
  m.binary.push_back(helstrom_measurements(rhos));
  m.states.push_back(std::move(rhos));
  m.tomographic.push_back(std::move(povm));
  return m;
}

/// Compound game: copy r prepares the SIC of fiducial r, measured with its aligned SIC-POVM.
inline PrepareMeasureModel compound_game_model(const SicCompound& c) {
  const int d = c.dim();
  PrepareMeasureModel m;
  m.dim = d;
  for (int r = 0; r < d; ++r) {
    std::vector<Matrix> rhos, povm;
    for (int j1 = 0; j1 < d; ++j1)
      for (int j2 = 0; j2 < d; ++j2) {
        const Matrix p = projector(c.state(j1, j2, r));
        rhos.push_back(p);
        povm.push_back(p / d);
      }
    m.binary.push_back(helstrom_measurements(rhos));
    m.states.push_back(std::move(rhos));
    m.tomographic.push_back(std::move(povm));
  }
  return m;
}

// ---------------------------------------------------------------------------
// See-saw

struct SeesawOptions {
  int iterations = 2000;
  double convergence = 1e-10;
};

struct SeesawResult {
  double value = 0.0;
  PrepareMeasureModel model;
  std::vector<double> trajectory;  // H after each completed sweep, starting from the initial model
  int sweeps = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline Matrix haar_pure_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(g(rng), g(rng));
  return projector(v / v.norm());
}

}  // namespace detail

/// Alternating maximisation of H: preparations are replaced by top eigenvectors
/// of their coefficient operators, binaries by Helstrom projectors, and each
/// d^2-outcome measurement by the square-root measurement of its copy, the
/// latter only when H does not decrease.
inline SeesawResult seesaw_maximize_H(int d, std::uint64_t seed, SeesawOptions opt = {}) {
  if (d < 2) throw InvalidModel("dimension below 2");
  std::mt19937_64 rng(seed);
  const int n = d * d;
  const auto pairs = input_pairs(n);
  const Matrix id = Matrix::Identity(d, d);

  PrepareMeasureModel m;
  m.dim = d;
  for (int r = 0; r < d; ++r) {
    std::vector<Matrix> rhos;
    for (int x = 0; x < n; ++x) rhos.push_back(detail::haar_pure_state(d, rng));
    m.binary.push_back(helstrom_measurements(rhos));
    m.tomographic.push_back(square_root_measurement(rhos));
    m.states.push_back(std::move(rhos));
  }

  // pairs touching each input, with the sign of the b = 1 element
  std::vector<std::vector<std::pair<std::size_t, bool>>> touching(n);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    touching[pairs[p].first].emplace_back(p, true);
    touching[pairs[p].second].emplace_back(p, false);
  }

  SeesawResult out;
  out.seed = seed;
  double h = detail::h_unchecked(m);
  out.trajectory.push_back(h);
  for (int sweep = 0; sweep < opt.iterations; ++sweep) {
    for (int i = 0; i < d; ++i) {
      for (int x = 0; x < n; ++x) {
        Matrix coeff = m.tomographic[i][x] / d;
        for (int z = 0; z < d; ++z)
          if (z != i) coeff -= m.tomographic[z][x];
        for (const auto& [p, first] : touching[x])
          coeff += (first ? m.binary[i][p] : Matrix(id - m.binary[i][p])) / d;
        m.states[i][x] = top_eigenprojector(coeff);
      }
      m.binary[i] = helstrom_measurements(m.states[i]);
    }
    double current = detail::h_unchecked(m);
    for (int z = 0; z < d; ++z) {
      auto previous = std::move(m.tomographic[z]);
      m.tomographic[z] = square_root_measurement(m.states[z]);
      const double candidate = detail::h_unchecked(m);
      if (candidate >= current) {
        current = candidate;
      } else {
        m.tomographic[z] = std::move(previous);
      }
    }
    out.trajectory.push_back(current);
    out.sweeps = sweep + 1;
    const bool converged = current - h < opt.convergence;
    h = current;
    if (converged) break;
  }
  out.value = h;
  out.model = std::move(m);
  return out;
}

}  // namespace siccompound
