#pragma once

// The SIC-compound: d^3 states psi_{(j1,j2),k} = X^{j1} Z^{j2} phi_k such that
// every fixed k is a SIC and every fixed (j1,j2) is an orthonormal basis.
// build_compound() gives the d = 4 construction, build_qubit_compound() the
// pair of antipodal tetrahedra.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "siccompound/clique.hpp"
#include "siccompound/linalg.hpp"
#include "siccompound/whgroup.hpp"

namespace siccompound {

/// (j1, j2) are the exponents of X and Z, k labels the fiducial.
struct CompoundIndex {
  int j1 = 0;
  int j2 = 0;
  int k = 0;

  friend bool operator==(const CompoundIndex&, const CompoundIndex&) = default;
};

/// sqrt(2 + sqrt 5)
inline double fiducial_t() { return std::sqrt(2.0 + std::sqrt(5.0)); }
/// sqrt(5 + sqrt 5)
inline double fiducial_n() { return std::sqrt(5.0 + std::sqrt(5.0)); }

/// Closed form of the negativity shared by all 64 compound states.
inline double compound_negativity() {
  const double t = fiducial_t();
  const double n = fiducial_n();
  return std::sqrt(1.0 + t * t) / (n * n);
}

/// phi_1 = (t, i, i, i)/n and its images under U, V and UV (in that order).
inline std::array<Vector, 4> build_fiducial_basis() {
  Vector phi(4);
  phi << fiducial_t(), 1i, 1i, 1i;
  phi /= fiducial_n();
  const auto klein = klein_unitaries();
  return {phi, klein.U * phi, klein.V * phi, klein.U * klein.V * phi};
}

class SicCompound {
 public:
  SicCompound(WHRep rep, std::vector<Vector> fiducials)
      : rep_(std::move(rep)), fiducials_(std::move(fiducials)) {
    const int d = rep_.dim;
    if (static_cast<int>(fiducials_.size()) != d) {
      throw DimensionMismatch("need d fiducials");
    }
    states_.reserve(static_cast<std::size_t>(d * d * d));
    for (int j1 = 0; j1 < d; ++j1)
      for (int j2 = 0; j2 < d; ++j2) {
        const Matrix disp = rep_.displacement(j1, j2);
        for (int k = 0; k < d; ++k) states_.push_back(disp * fiducials_[k]);
      }
  }

  int dim() const noexcept { return rep_.dim; }
  std::size_t size() const noexcept { return states_.size(); }
  const WHRep& rep() const noexcept { return rep_; }
  const std::vector<Vector>& fiducials() const noexcept { return fiducials_; }
  const std::vector<Vector>& states() const noexcept { return states_; }

  std::size_t flat(const CompoundIndex& i) const {
    const int d = dim();
    return static_cast<std::size_t>((i.j1 * d + i.j2) * d + i.k);
  }

  CompoundIndex index(std::size_t flat) const {
    const int d = dim();
    const int f = static_cast<int>(flat);
    return {f / (d * d), (f / d) % d, f % d};
  }

  const Vector& state(const CompoundIndex& i) const { return states_[flat(i)]; }
  const Vector& state(int j1, int j2, int k) const { return state({j1, j2, k}); }

  /// Flat index of the state equal to v up to phase, if any.
  std::optional<std::size_t> find(const Vector& v, double tol = kDerivedTolerance) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
      if (std::abs(overlap2(states_[i], v) - 1.0) <= tol) return i;
    return std::nullopt;
  }

 private:
  WHRep rep_;
  std::vector<Vector> fiducials_;
  std::vector<Vector> states_;
};

/// Throws PropertyViolation unless every fixed k is a SIC and every fixed j is an orthonormal basis.
inline void check_compound_properties(const SicCompound& c, double tol = kDerivedTolerance) {
  const int d = c.dim();
  const double sic_value = 1.0 / (d + 1);
  auto describe = [](const CompoundIndex& a, const CompoundIndex& b) {
    auto s = [](const CompoundIndex& i) {
      return "(" + std::to_string(i.j1) + "," + std::to_string(i.j2) + "," + std::to_string(i.k) +
             ")";
    };
    return s(a) + " vs " + s(b);
  };
  for (std::size_t a = 0; a < c.size(); ++a) {
    const auto ia = c.index(a);
    if (!is_normalized(c.states()[a], tol)) {
      throw PropertyViolation("state " + describe(ia, ia) + " is not normalised");
    }
    for (std::size_t b = a + 1; b < c.size(); ++b) {
      const auto ib = c.index(b);
      const double o = overlap2(c.states()[a], c.states()[b]);
      if (ia.k == ib.k && std::abs(o - sic_value) > tol) {
        throw PropertyViolation("SIC overlap " + std::to_string(o) + " at " + describe(ia, ib));
      }
      if (ia.j1 == ib.j1 && ia.j2 == ib.j2 && o > tol) {
        throw PropertyViolation("basis overlap " + std::to_string(o) + " at " + describe(ia, ib));
      }
    }
  }
}

inline SicCompound build_compound() {
  const auto fid = build_fiducial_basis();
  SicCompound c(compound_rep_d4(), {fid.begin(), fid.end()});
  check_compound_properties(c);
  return c;
}

/// Qubit compound: the tetrahedron fiducial and its antipode under the clock/shift group.
inline SicCompound build_qubit_compound() {
  const double theta = std::acos(1.0 / std::sqrt(3.0));
  Vector up(2), down(2);
  up << std::cos(theta / 2), std::polar(std::sin(theta / 2), std::numbers::pi / 4);
  down << -std::conj(up(1)), std::conj(up(0));
  SicCompound c(clock_shift_rep(2), {up, down});
  check_compound_properties(c);
  return c;
}

// ---------------------------------------------------------------------------
// Latin-square organisation (d = 4 only)

/// Labels in the Latin-square picture: j1 picks an element of {I, X^2, Z^2, X^2 Z^2},
/// j2 picks a coset representative from {I, X, Z, XZ}.
struct LatinIndex {
  int j1 = 0;
  int j2 = 0;
  int k = 0;
};

inline constexpr std::array<const char*, 4> kSubgroupNames{"I", "X^2", "Z^2", "X^2Z^2"};
inline constexpr std::array<const char*, 4> kCosetNames{"I", "X", "Z", "XZ"};

/// Exponents of X and Z for subgroup element j1 times coset representative j2.
/// Equal to the product up to a global phase.
inline CompoundIndex from_latin(const LatinIndex& l) {
  const int alpha = l.j1 & 1, beta = l.j1 >> 1;
  const int gamma = l.j2 & 1, delta = l.j2 >> 1;
  return {2 * alpha + gamma, 2 * beta + delta, l.k};
}

inline Matrix subgroup_element(const WHRep& rep, int j1) {
  return rep.displacement(2 * (j1 & 1), 2 * (j1 >> 1));
}

inline Matrix coset_representative(const WHRep& rep, int j2) {
  return rep.displacement(j2 & 1, j2 >> 1);
}

struct LatinSquare {
  /// labels[row][k], labels 1..4, row r holds coset representative row_cosets[r].
  std::array<std::array<int, 4>, 4> labels{};
  std::array<int, 4> row_cosets{};
  /// For each label 1..4 (index label-1): flat indices of the 16 states of that additional SIC.
  std::array<std::vector<std::size_t>, 4> extra_sics;
  /// 16 additional bases: each takes one state from every block of one row,
  /// never two with the same subgroup element.
  std::vector<std::vector<std::size_t>> extra_bases;
};

/// Reference label array, indexed [row][k] with row 0 at the bottom.
inline std::array<std::array<int, 4>, 4> reference_latin_square() {
  return {{{4, 3, 2, 1}, {3, 4, 1, 2}, {2, 1, 4, 3}, {1, 2, 3, 4}}};
}

namespace detail {

inline bool all_cross_overlaps(const SicCompound& c, const std::vector<std::size_t>& a,
                               const std::vector<std::size_t>& b, double value, double tol) {
  for (std::size_t x : a)
    for (std::size_t y : b)
      if (std::abs(overlap2(c.states()[x], c.states()[y]) - value) > tol) return false;
  return true;
}

inline bool is_sic(const SicCompound& c, const std::vector<std::size_t>& s, double tol) {
  const double v = 1.0 / (c.dim() + 1);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (std::abs(overlap2(c.states()[s[i]], c.states()[s[j]]) - v) > tol) return false;
  return s.size() == static_cast<std::size_t>(c.dim() * c.dim());
}

inline bool is_orthonormal_set(const SicCompound& c, const std::vector<std::size_t>& s,
                               double tol) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (overlap2(c.states()[s[i]], c.states()[s[j]]) > tol) return false;
  return s.size() == static_cast<std::size_t>(c.dim());
}

}  // namespace detail

/// Orbits of each defining SIC under {I, X^2, Z^2, X^2 Z^2}, arranged as the
/// the reference Latin square. Blocks sharing a label form the four additional
/// SICs; each row also holds four further bases, one state per block.
inline LatinSquare latin_square(const SicCompound& c, double tol = kDerivedTolerance) {
  if (c.dim() != 4) throw DimensionMismatch("Latin square is defined for d = 4");
  const auto& rep = c.rep();

  // blocks[j2][k]: orbit of coset_j2 phi_k, ordered by subgroup element.
  std::array<std::array<std::vector<std::size_t>, 4>, 4> blocks;
  for (int k = 0; k < 4; ++k) {
    std::vector<int> seen(16, 0);
    for (int j2 = 0; j2 < 4; ++j2) {
      const Vector base = coset_representative(rep, j2) * c.fiducials()[k];
      for (int j1 = 0; j1 < 4; ++j1) {
        const auto hit = c.find(subgroup_element(rep, j1) * base, tol);
        if (!hit || c.index(*hit).k != k) {
          throw OrbitStructureBroken("orbit leaves the defining SIC of column " +
                                     std::to_string(k));
        }
        const auto idx = c.index(*hit);
        ++seen[idx.j1 * 4 + idx.j2];
        blocks[j2][k].push_back(*hit);
      }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) {
      throw OrbitStructureBroken("orbits do not partition the defining SIC of column " +
                                 std::to_string(k) + " into 4+4+4+4");
    }
  }

  // Group blocks across columns: two blocks share a label when all their cross overlaps are 1/5.
  std::array<std::array<int, 4>, 4> cls{};
  for (auto& row : cls) row.fill(-1);
  for (int j2 = 0; j2 < 4; ++j2) cls[j2][0] = j2;
  for (int k = 1; k < 4; ++k) {
    for (int j2 = 0; j2 < 4; ++j2) {
      int match = -1;
      for (int r = 0; r < 4; ++r) {
        if (detail::all_cross_overlaps(c, blocks[j2][k], blocks[r][0], 0.2, tol)) {
          if (match != -1) throw OrbitStructureBroken("block matches two label classes");
          match = cls[r][0];
        }
      }
      if (match == -1) throw OrbitStructureBroken("block matches no label class");
      cls[j2][k] = match;
    }
  }
  auto is_latin = [](const std::array<std::array<int, 4>, 4>& a) {
    for (int i = 0; i < 4; ++i) {
      std::array<int, 4> row{}, col{};
      for (int j = 0; j < 4; ++j) {
        ++row[a[i][j]];
        ++col[a[j][i]];
      }
      for (int v = 0; v < 4; ++v)
        if (row[v] != 1 || col[v] != 1) return false;
    }
    return true;
  };
  if (!is_latin(cls)) throw OrbitStructureBroken("label classes do not form a Latin square");

  // Order the rows (identity coset first) so that the diagonal carries a single label.
  std::array<int, 4> order{0, 1, 2, 3};
  bool found = false;
  do {
    if (order[0] != 0) break;
    if (cls[order[1]][1] == cls[0][0] && cls[order[2]][2] == cls[0][0] &&
        cls[order[3]][3] == cls[0][0]) {
      found = true;
      break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  if (!found) throw OrbitStructureBroken("no row order puts one label on the diagonal");

  std::array<int, 4> label_of_class{};
  label_of_class[cls[0][0]] = 4;
  label_of_class[cls[0][1]] = 3;
  label_of_class[cls[0][2]] = 2;
  label_of_class[cls[0][3]] = 1;

  LatinSquare out;
  out.row_cosets = order;
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) out.labels[r][k] = label_of_class[cls[order[r]][k]];

  for (int j2 = 0; j2 < 4; ++j2)
    for (int k = 0; k < 4; ++k) {
      auto& sic = out.extra_sics[label_of_class[cls[j2][k]] - 1];
      sic.insert(sic.end(), blocks[j2][k].begin(), blocks[j2][k].end());
    }
  for (auto& sic : out.extra_sics) {
    std::sort(sic.begin(), sic.end());
    if (!detail::is_sic(c, sic, tol)) throw OrbitStructureBroken("label class is not a SIC");
  }
  // A row holds its four defining bases (one subgroup element each) and four
  // more: each state of the first block has exactly one orthogonal partner
  // carrying a different subgroup element in every other block of the row.
  for (int j2 = 0; j2 < 4; ++j2) {
    for (int j1 = 0; j1 < 4; ++j1) {
      const std::size_t first = blocks[j2][0][j1];
      std::vector<std::size_t> basis{first};
      for (int k = 1; k < 4; ++k) {
        std::vector<std::size_t> partners;
        for (int other = 0; other < 4; ++other) {
          const std::size_t s = blocks[j2][k][other];
          if (other != j1 && overlap2(c.states()[first], c.states()[s]) <= tol) partners.push_back(s);
        }
        if (partners.size() != 1) {
          throw OrbitStructureBroken("row " + std::to_string(j2) +
                                     " does not split into orthonormal bases");
        }
        basis.push_back(partners.front());
      }
      std::sort(basis.begin(), basis.end());
      if (!detail::is_orthonormal_set(c, basis, tol)) {
        throw OrbitStructureBroken("row " + std::to_string(j2) + " basis is not orthonormal");
      }
      out.extra_bases.push_back(std::move(basis));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive census

struct CompoundReport {
  int dim = 0;
  std::size_t state_count = 0;
  std::size_t sic_count = 0;
  std::size_t basis_count = 0;
  std::vector<std::vector<std::size_t>> sics;
  std::vector<std::vector<std::size_t>> bases;
  std::vector<int> per_state_basis_membership;
  std::vector<int> per_state_sic_membership;
  std::vector<int> per_state_sic_partner_count;
  std::vector<int> per_state_orthogonal_count;
  std::vector<int> per_state_other_count;
  /// intersection size -> number of unordered SIC pairs with that intersection (nonempty only)
  std::map<std::size_t, std::size_t> sic_intersections;
  /// distinct overlap values outside {0, 1/(d+1), 1} -> number of unordered pairs
  std::vector<std::pair<double, std::size_t>> other_overlaps;
  double negativity = 0.0;
  double negativity_expected = 0.0;
  double negativity_max_deviation = 0.0;
  std::optional<LatinSquare> latin;
  std::string latin_error;
  double tolerance = kDerivedTolerance;
};

inline CompoundReport verify_compound(const SicCompound& c, double tol = kDerivedTolerance) {
  const int d = c.dim();
  const std::size_t n = c.size();
  const double sic_value = 1.0 / (d + 1);
  CompoundReport r;
  r.dim = d;
  r.state_count = n;
  r.tolerance = tol;

  std::vector<double> ov(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) ov[a * n + b] = overlap2(c.states()[a], c.states()[b]);

  const Graph orth = Graph::from_predicate(n, [&](std::size_t a, std::size_t b) {
    return ov[a * n + b] <= tol;
  });
  const Graph sicg = Graph::from_predicate(n, [&](std::size_t a, std::size_t b) {
    return std::abs(ov[a * n + b] - sic_value) <= tol;
  });

  r.bases = cliques_of_size(orth, static_cast<std::size_t>(d));
  r.sics = cliques_of_size(sicg, static_cast<std::size_t>(d * d));
  r.basis_count = r.bases.size();
  r.sic_count = r.sics.size();

  r.per_state_basis_membership.assign(n, 0);
  r.per_state_sic_membership.assign(n, 0);
  for (const auto& b : r.bases)
    for (std::size_t s : b) ++r.per_state_basis_membership[s];
  for (const auto& s : r.sics)
    for (std::size_t x : s) ++r.per_state_sic_membership[x];

  std::vector<double> others;
  for (std::size_t a = 0; a < n; ++a) {
    r.per_state_sic_partner_count.push_back(static_cast<int>(sicg.degree(a)));
    r.per_state_orthogonal_count.push_back(static_cast<int>(orth.degree(a)));
    int other = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const double o = ov[a * n + b];
      if (o <= tol || std::abs(o - sic_value) <= tol || std::abs(o - 1.0) <= tol) continue;
      ++other;
      if (b > a) others.push_back(o);
    }
    r.per_state_other_count.push_back(other);
  }
  std::sort(others.begin(), others.end());
  for (double o : others) {
    if (!r.other_overlaps.empty() && o - r.other_overlaps.back().first <= tol) {
      ++r.other_overlaps.back().second;
    } else {
      r.other_overlaps.emplace_back(o, 1);
    }
  }

  for (std::size_t i = 0; i < r.sics.size(); ++i)
    for (std::size_t j = i + 1; j < r.sics.size(); ++j) {
      std::vector<std::size_t> common;
      std::set_intersection(r.sics[i].begin(), r.sics[i].end(), r.sics[j].begin(),
                            r.sics[j].end(), std::back_inserter(common));
      if (!common.empty()) ++r.sic_intersections[common.size()];
    }

  if (d == 4) {
    r.negativity_expected = compound_negativity();
    r.negativity = negativity(c.states()[0], {2, 2});
    for (const auto& s : c.states()) {
      r.negativity_max_deviation = std::max(
          r.negativity_max_deviation, std::abs(negativity(s, {2, 2}) - r.negativity_expected));
    }
    try {
      r.latin = latin_square(c, tol);
    } catch (const OrbitStructureBroken& e) {
      r.latin_error = e.what();
    }
  }
  return r;
}

}  // namespace siccompound
