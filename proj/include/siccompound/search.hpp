#pragma once

// Orthogonal-SIC searches: the qutrit analysis over the Hesse fiducial family,
// and an exact clique search over externally supplied fiducial catalogues.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "siccompound/clique.hpp"
#include "siccompound/linalg.hpp"
#include "siccompound/whgroup.hpp"

namespace siccompound {

/// Largest deviation of |<v|X^a Z^b v>|^2 from 1/(d+1) over the nontrivial displacements.
inline double fiducial_deviation(const Vector& v, const WHRep& rep) {
  const int d = rep.dim;
  const Vector u = v / v.norm();
  double worst = 0.0;
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Matrix disp = xa;
    for (int b = 0; b < d; ++b) {
      if (a != 0 || b != 0) {
        worst = std::max(worst, std::abs(overlap2(u, disp * u) - 1.0 / (d + 1)));
      }
      disp = disp * rep.Z;
    }
    xa = xa * rep.X;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Angle systems

/// F(t1, t2) = c0 + c1 e^{i t1} + c2 e^{i t2} + c12 e^{i (t1 + t2)}; roots solve Re F = Im F = 0.
struct AngleSystem {
  Complex c0, c1, c2, c12;

  Complex operator()(double t1, double t2) const {
    const Complex e1 = std::polar(1.0, t1), e2 = std::polar(1.0, t2);
    return c0 + c1 * e1 + c2 * e2 + c12 * e1 * e2;
  }
};

/// cos t1 - cos(t1+t2) - cos(t2+pi/3) = 1 and sin t1 - sin(t1+t2) - sin(t2+pi/3) = 0.
inline AngleSystem qutrit_orthogonality_system() {
  return {-1.0, 1.0, -std::polar(1.0, std::numbers::pi / 3), -1.0};
}

struct AngleRoot {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double residual = 0.0;
};

inline constexpr int kAngleGrid = 7200;

inline double wrap_angle(double t) {
  const double two_pi = 2.0 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

/// Dense grid scan for local minima of |F|^2 followed by Newton polishing.
inline std::vector<AngleRoot> solve_angle_system(const AngleSystem& sys, int grid = kAngleGrid) {
  const double h = 2.0 * std::numbers::pi / grid;
  std::vector<Complex> e(grid);
  for (int i = 0; i < grid; ++i) e[i] = std::polar(1.0, i * h);
  auto fill_row = [&](int i, std::vector<double>& row) {
    i = (i + grid) % grid;
    const Complex a = sys.c0 + sys.c1 * e[i];
    const Complex b = sys.c2 + sys.c12 * e[i];
    for (int j = 0; j < grid; ++j) row[j] = std::norm(a + b * e[j]);
  };
  std::vector<double> prev(grid), cur(grid), next(grid);
  fill_row(-1, prev);
  fill_row(0, cur);

  // A simple root sits within half a cell of a grid point, so |F|^2 there is O(h^2).
  const double threshold = std::max(1e-3, 100.0 * h * h);
  std::vector<AngleRoot> roots;
  for (int i = 0; i < grid; ++i) {
    fill_row(i + 1, next);
    for (int j = 0; j < grid; ++j) {
      const double v = cur[j];
      if (v > threshold) continue;
      bool minimum = true;
      for (const auto* row : {&prev, &cur, &next}) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (row == &cur && dj == 0) continue;
          if ((*row)[(j + dj + grid) % grid] < v) minimum = false;
        }
      }
      if (!minimum) continue;

      double t1 = i * h, t2 = j * h;
      for (int it = 0; it < 50; ++it) {
        const Complex e1 = std::polar(1.0, t1), e2 = std::polar(1.0, t2);
        const Complex F = sys.c0 + sys.c1 * e1 + sys.c2 * e2 + sys.c12 * e1 * e2;
        const Complex d1 = 1i * (sys.c1 * e1 + sys.c12 * e1 * e2);
        const Complex d2 = 1i * (sys.c2 * e2 + sys.c12 * e1 * e2);
        const double det = d1.real() * d2.imag() - d2.real() * d1.imag();
        if (std::abs(det) < 1e-14) break;
        const double s1 = (F.real() * d2.imag() - d2.real() * F.imag()) / det;
        const double s2 = (d1.real() * F.imag() - F.real() * d1.imag()) / det;
        t1 -= s1;
        t2 -= s2;
        if (std::abs(s1) + std::abs(s2) < 1e-15) break;
      }
      t1 = wrap_angle(t1);
      t2 = wrap_angle(t2);
      const double res = std::abs(sys(t1, t2));
      if (res > 1e-10) continue;
      const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](const AngleRoot& r) {
        const double a = std::abs(std::remainder(r.theta1 - t1, 2 * std::numbers::pi));
        const double b = std::abs(std::remainder(r.theta2 - t2, 2 * std::numbers::pi));
        return a < 1e-6 && b < 1e-6;
      });
      if (!duplicate) roots.push_back({t1, t2, res});
    }
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  std::sort(roots.begin(), roots.end(), [](const AngleRoot& a, const AngleRoot& b) {
    return a.theta1 != b.theta1 ? a.theta1 < b.theta1 : a.theta2 < b.theta2;
  });
  return roots;
}

inline std::vector<AngleRoot> qutrit_orthogonality_solutions() {
  return solve_angle_system(qutrit_orthogonality_system());
}

// ---------------------------------------------------------------------------
// Qutrit fiducials

/// One of the four qutrit MUBs; basis 0 is computational, basis 1 the Fourier
/// basis f_m(i) = w^{-m i}/sqrt 3, bases 2 and 3 the remaining two.
inline std::array<Vector, 3> qutrit_mub(int basis) {
  const Complex w = root_of_unity(3);
  std::array<Vector, 3> out;
  for (int m = 0; m < 3; ++m) {
    out[m] = Vector::Zero(3);
    for (int i = 0; i < 3; ++i) {
      switch (basis) {
        case 0: out[m](i) = i == m ? 1.0 : 0.0; break;
        case 1: out[m](i) = std::pow(std::conj(w), m * i); break;
        case 2: out[m](i) = i == m ? Complex(1.0) : w; break;
        case 3: out[m](i) = i == m ? Complex(1.0) : w * w; break;
        default: throw DimensionMismatch("qutrit MUB index must be 0..3");
      }
    }
    out[m] /= out[m].norm();
  }
  return out;
}

/// (|e1> - e^{i theta} |e2>)/sqrt 2 for an element pair of one qutrit MUB.
struct QutritFiducial {
  int basis = 0;
  std::array<int, 2> pair{0, 1};
  double theta = 0.0;

  Vector vector() const {
    const auto b = qutrit_mub(basis);
    return (b[pair[0]] - std::polar(1.0, theta) * b[pair[1]]) / std::sqrt(2.0);
  }
};

/// <phi1(t1)|phi2(t2)> multiplied by 2 e^{i t1}, expressed as an AngleSystem.
inline AngleSystem orthogonality_system(const QutritFiducial& first, const QutritFiducial& second) {
  const auto a = qutrit_mub(first.basis);
  const auto b = qutrit_mub(second.basis);
  const Vector& e1 = a[first.pair[0]];
  const Vector& e2 = a[first.pair[1]];
  const Vector& g1 = b[second.pair[0]];
  const Vector& g2 = b[second.pair[1]];
  return {-e2.dot(g1), e1.dot(g1), e2.dot(g2), -e1.dot(g2)};
}

struct QutritSolution {
  QutritFiducial first;
  QutritFiducial second;
  double inner_product = 0.0;            // |<phi1|phi2>|
  double completion_deviation = 0.0;     // fiducial deviation of the unique third orthogonal vector
};

struct QutritReport {
  std::vector<QutritSolution> solutions;
  std::size_t max_orthogonal_family = 0;
  std::vector<Vector> witness;
  double witness_inner_product = 0.0;
  std::array<double, 2> witness_fiducial_deviation{};
  /// max over matching orbit labels of |<X^a Z^b phi1 | X^a Z^b phi2>|
  double witness_orbit_orthogonality = 0.0;
  std::array<double, 2> witness_orbit_sic_deviation{};
  double witness_completion_deviation = 0.0;
};

/// Orthogonal-fiducial analysis for d = 3. phi1 is fixed on the first two
/// computational basis elements; phi2 runs over the three element pairs of the
/// Fourier basis.
inline QutritReport qutrit_no_compound() {
  const auto rep = clock_shift_rep(3);
  QutritReport report;

  auto cross = [](const Vector& a, const Vector& b) {
    Vector c(3);
    c(0) = std::conj(a(1) * b(2) - a(2) * b(1));
    c(1) = std::conj(a(2) * b(0) - a(0) * b(2));
    c(2) = std::conj(a(0) * b(1) - a(1) * b(0));
    return Vector(c / c.norm());
  };

  std::vector<Vector> vectors;
  const QutritFiducial first{0, {0, 1}, 0.0};
  for (const std::array<int, 2> pair : {std::array{0, 1}, std::array{0, 2}, std::array{1, 2}}) {
    const QutritFiducial second{1, pair, 0.0};
    for (const auto& root : solve_angle_system(orthogonality_system(first, second))) {
      QutritSolution s{first, second};
      s.first.theta = root.theta1;
      s.second.theta = root.theta2;
      const Vector a = s.first.vector(), b = s.second.vector();
      s.inner_product = std::abs(a.dot(b));
      s.completion_deviation = fiducial_deviation(cross(a, b), rep);
      report.solutions.push_back(s);
      vectors.push_back(a);
      vectors.push_back(b);
    }
  }

  const Graph g = Graph::from_predicate(vectors.size(), [&](std::size_t a, std::size_t b) {
    return std::abs(vectors[a].dot(vectors[b])) <= 1e-8;
  });
  report.max_orthogonal_family = maximum_clique(g).size();

  Vector w1(3), w2(3);
  w1 << 1, 1, 0;
  w2 << 1, -1, 0;
  w1 /= std::sqrt(2.0);
  w2 /= std::sqrt(2.0);
  report.witness = {w1, w2};
  report.witness_inner_product = std::abs(w1.dot(w2));
  report.witness_fiducial_deviation = {fiducial_deviation(w1, rep), fiducial_deviation(w2, rep)};
  report.witness_completion_deviation = fiducial_deviation(cross(w1, w2), rep);
  for (int i = 0; i < 2; ++i) {
    const Vector& w = report.witness[i];
    double worst = 0.0;
    for (int a = 0; a < 9; ++a)
      for (int b = a + 1; b < 9; ++b)
        worst = std::max(worst, std::abs(overlap2(rep.displacement(a / 3, a % 3) * w,
                                                  rep.displacement(b / 3, b % 3) * w) -
                                          0.25));
    report.witness_orbit_sic_deviation[i] = worst;
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Matrix disp = rep.displacement(a, b);
      report.witness_orbit_orthogonality =
          std::max(report.witness_orbit_orthogonality, std::abs((disp * w1).dot(disp * w2)));
    }
  return report;
}

// ---------------------------------------------------------------------------
// Fiducial catalogues

enum class Representation { ClockShift, CompoundD4 };

inline constexpr double kIngestionTolerance = 1e-8;
inline constexpr double kOrthogonalityTolerance = 1e-8;

struct FiducialSet {
  int dim = 0;
  Representation representation = Representation::ClockShift;
  std::vector<Vector> vectors;  // normalised
  std::string source_label;
  std::vector<double> deviations;

  WHRep rep() const {
    return representation == Representation::CompoundD4 ? compound_rep_d4() : clock_shift_rep(dim);
  }
};

/// Validates every vector as a fiducial; throws NotAFiducial(index, deviation) on failure.
inline FiducialSet make_fiducial_set(int dim, Representation representation,
                                     std::vector<Vector> vectors, std::string label,
                                     double tol = kIngestionTolerance) {
  if (dim < 2) throw ParseError("dim must be at least 2");
  if (representation == Representation::CompoundD4 && dim != 4) {
    throw ParseError("compound-d4 representation requires dim 4");
  }
  FiducialSet set{dim, representation, {}, std::move(label), {}};
  const WHRep rep = set.rep();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const Vector& v = vectors[i];
    if (v.size() != dim) throw ParseError("vector " + std::to_string(i) + " has wrong length");
    if (v.norm() <= kTolerance) throw NotAFiducial(i, 1.0);
    const Vector u = v / v.norm();
    const double dev = fiducial_deviation(u, rep);
    if (!(dev <= tol)) throw NotAFiducial(i, dev);
    set.vectors.push_back(u);
    set.deviations.push_back(dev);
  }
  return set;
}

/// Format: {"dim": d, "representation": "clock-shift" | "compound-d4", "label": "...",
///          "vectors": [[[re, im], ...], ...]}
inline FiducialSet parse_fiducials(const std::string& text, double tol = kIngestionTolerance) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  try {
    const int dim = doc.at("dim").get<int>();
    const std::string repr = doc.value("representation", std::string("clock-shift"));
    Representation r;
    if (repr == "clock-shift") {
      r = Representation::ClockShift;
    } else if (repr == "compound-d4") {
      r = Representation::CompoundD4;
    } else {
      throw ParseError("unknown representation '" + repr + "'");
    }
    std::vector<Vector> vectors;
    for (const auto& jv : doc.at("vectors")) {
      Vector v(static_cast<Eigen::Index>(jv.size()));
      for (std::size_t i = 0; i < jv.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = Complex(jv[i].at(0).get<double>(), jv[i].at(1).get<double>());
      }
      vectors.push_back(std::move(v));
    }
    if (vectors.empty()) throw ParseError("no vectors");
    return make_fiducial_set(dim, r, std::move(vectors), doc.value("label", std::string()), tol);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

inline FiducialSet ingest_fiducials(const std::string& path, double tol = kIngestionTolerance) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_fiducials(buffer.str(), tol);
}

inline nlohmann::json fiducials_to_json(int dim, Representation r, const std::vector<Vector>& vs,
                                        const std::string& label) {
  nlohmann::json doc;
  doc["dim"] = dim;
  doc["representation"] = r == Representation::CompoundD4 ? "compound-d4" : "clock-shift";
  doc["label"] = label;
  doc["vectors"] = nlohmann::json::array();
  for (const auto& v : vs) {
    nlohmann::json jv = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) jv.push_back({v(i).real(), v(i).imag()});
    doc["vectors"].push_back(jv);
  }
  return doc;
}

inline Graph orthogonality_graph(const FiducialSet& f, double tol = kOrthogonalityTolerance) {
  return Graph::from_predicate(f.vectors.size(), [&](std::size_t a, std::size_t b) {
    return std::abs(f.vectors[a].dot(f.vectors[b])) <= tol;
  });
}

struct CliqueResult {
  std::size_t size = 0;
  std::vector<std::size_t> witness;
};

/// Largest family of mutually orthogonal fiducials, hence of mutually orthogonal SICs.
inline CliqueResult max_orthogonal_sics(const FiducialSet& f,
                                        double tol = kOrthogonalityTolerance) {
  const auto clique = maximum_clique(orthogonality_graph(f, tol));
  return {clique.size(), clique};
}

}  // namespace siccompound
