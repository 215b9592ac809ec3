#pragma once

// Key distribution with the d = 4 compound. Alice measures the 64 compound
// states (each weighted 1/16), Bob the complex conjugates. The noise model is
// the twirl-invariant family (1-p-q) Phi + q pi + p kappa on C^4 (x) C^4.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siccompound/compound.hpp"
#include "siccompound/format.hpp"
#include "siccompound/linalg.hpp"
#include "siccompound/whgroup.hpp"

namespace siccompound {

enum class Protocol { SiftingA, SiftingB, FiveMUB, CoherentInfo };

inline std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::SiftingA: return "sifting-a";
    case Protocol::SiftingB: return "sifting-b";
    case Protocol::FiveMUB: return "five-mub";
    case Protocol::CoherentInfo: return "coherent-info";
  }
  return "unknown";
}

inline Protocol parse_protocol(const std::string& s) {
  for (Protocol p : {Protocol::SiftingA, Protocol::SiftingB, Protocol::FiveMUB,
                     Protocol::CoherentInfo})
    if (to_string(p) == s) return p;
  throw InvalidParams("unknown protocol '" + s + "'");
}

struct NoiseParams {
  double p = 0.0;  // dephasing weight
  double q = 0.0;  // depolarising weight
};

inline constexpr double kParamTolerance = 1e-12;

inline void validate(const NoiseParams& n) {
  if (!(n.p >= -kParamTolerance && n.q >= -kParamTolerance &&
        n.p + n.q <= 1.0 + kParamTolerance)) {
    throw InvalidParams("need p >= 0, q >= 0, p + q <= 1; got p = " + std::to_string(n.p) +
                        ", q = " + std::to_string(n.q));
  }
}

inline constexpr int kLocalDim = 4;
inline constexpr int kPairDim = kLocalDim * kLocalDim;

/// Phi = |Phi><Phi| with |Phi> = 1/2 sum |ii>.
inline Matrix maximally_entangled() {
  Vector phi = Vector::Zero(kPairDim);
  for (int i = 0; i < kLocalDim; ++i) phi(i * kLocalDim + i) = 0.5;
  return projector(phi);
}

inline Matrix maximally_mixed() { return Matrix::Identity(kPairDim, kPairDim) / kPairDim; }

/// kappa = 1/4 sum |ii><ii|.
inline Matrix perfectly_correlated() {
  Matrix k = Matrix::Zero(kPairDim, kPairDim);
  for (int i = 0; i < kLocalDim; ++i) k(i * kLocalDim + i, i * kLocalDim + i) = 0.25;
  return k;
}

inline Matrix family_state(const NoiseParams& n) {
  validate(n);
  return (1.0 - n.p - n.q) * maximally_entangled() + n.q * maximally_mixed() +
         n.p * perfectly_correlated();
}

struct FamilyCoordinates {
  double p = 0.0;
  double q = 0.0;
  double residual = 0.0;  // max entry of rho minus its fit
};

/// Least-squares fit of a unit-trace operator in span{Phi, pi, kappa}. The
/// coordinates are returned as they are; they may leave the valid region.
inline FamilyCoordinates family_coordinates(const Matrix& rho) {
  const std::array<Matrix, 3> basis{maximally_entangled(), maximally_mixed(),
                                    perfectly_correlated()};
  Eigen::Matrix3d gram;
  Eigen::Vector3d rhs;
  for (int a = 0; a < 3; ++a) {
    rhs(a) = (basis[a].adjoint() * rho).trace().real();
    for (int b = 0; b < 3; ++b) gram(a, b) = (basis[a].adjoint() * basis[b]).trace().real();
  }
  const Eigen::Vector3d c = gram.ldlt().solve(rhs);
  const Matrix fit = c(0) * basis[0] + c(1) * basis[1] + c(2) * basis[2];
  return {c(2), c(1), max_abs(rho - fit)};
}

struct TwirlResult {
  Matrix state;
  double p = 0.0;
  double q = 0.0;
  double residual = 0.0;
};

/// Uniform average of (Y (x) Y*) rho (Y (x) Y*)^dagger over the group.
inline TwirlResult twirl(const Matrix& rho, const ProjectiveUnitarySet& group) {
  if (rho.rows() != kPairDim || rho.cols() != kPairDim || group.dim() != kLocalDim) {
    throw DimensionMismatch("twirl expects a 16 x 16 operator and a group on C^4");
  }
  Matrix acc = Matrix::Zero(kPairDim, kPairDim);
  for (const auto& y : group.elements()) {
    const Matrix yy = tensor(y, Matrix(y.conjugate()));
    acc += yy * rho * yy.adjoint();
  }
  TwirlResult out;
  out.state = acc / static_cast<double>(group.size());
  const auto c = family_coordinates(out.state);
  out.p = c.p;
  out.q = c.q;
  out.residual = c.residual;
  return out;
}

inline TwirlResult twirl(const Matrix& rho) { return twirl(rho, automorphism_group()); }

// ---------------------------------------------------------------------------
// Sifting

/// One pair of sifted outcomes: Alice's state, Bob's state (before conjugation)
/// and the key symbols they record.
struct SiftOutcome {
  Vector alice;
  Vector bob;
  int key_a = 0;
  int key_b = 0;
};

/// Classical-quantum state sigma_{K_A K_B E}: blocks[a][b] is the (unnormalised
/// within the block, normalised overall) conditional state of E.
struct SiftedState {
  std::array<std::array<Matrix, 4>, 4> blocks;
  double success_prob = 0.0;  // probability of this branch times the branch count
  int branch_count = 1;

  int env_dim() const { return static_cast<int>(blocks[0][0].rows()); }

  double key_prob(int a, int b) const { return blocks[a][b].trace().real(); }

  /// Full operator on K_A (x) K_B (x) E.
  Matrix joint() const {
    const int e = env_dim();
    Matrix out = Matrix::Zero(16 * e, 16 * e);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) out.block((a * 4 + b) * e, (a * 4 + b) * e, e, e) = blocks[a][b];
    return out;
  }
};

inline constexpr double kMinSuccessProbability = 1e-12;
inline constexpr double kOutcomeWeight = 1.0 / 256.0;

/// Purifies rho as sum sqrt(lambda_i) |v_i>|i>_E and applies the sifting branch.
inline SiftedState sift_outcomes(const Matrix& rho, const std::vector<SiftOutcome>& outcomes,
                                 int branch_count) {
  const auto eig = hermitian_eigen(rho);
  const RealVector w = eig.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix purification = eig.vectors * w.asDiagonal();  // rows AB, columns E
  const int e = static_cast<int>(purification.cols());

  SiftedState s;
  s.branch_count = branch_count;
  for (auto& row : s.blocks)
    for (auto& m : row) m = Matrix::Zero(e, e);
  double total = 0.0;
  for (const auto& o : outcomes) {
    const Vector ab = tensor(o.alice, Vector(o.bob.conjugate()));
    const Vector env = std::sqrt(kOutcomeWeight) * (ab.adjoint() * purification).transpose();
    const Matrix block = env * env.adjoint();
    s.blocks[o.key_a][o.key_b] += block;
    total += block.trace().real();
  }
  if (total < kMinSuccessProbability) {
    throw ZeroSuccessProbability("sifting success probability " + std::to_string(total));
  }
  for (auto& row : s.blocks)
    for (auto& m : row) m /= total;
  s.success_prob = total * branch_count;
  return s;
}

/// Sifting B branch: j1 and j2 match, key = k. Indices are Latin-square coordinates.
inline std::vector<SiftOutcome> sifting_b_branch(const SicCompound& c, int j1, int j2) {
  std::vector<SiftOutcome> out;
  for (int ka = 0; ka < 4; ++ka)
    for (int kb = 0; kb < 4; ++kb)
      out.push_back({c.state(from_latin({j1, j2, ka})), c.state(from_latin({j1, j2, kb})), ka, kb});
  return out;
}

/// Sifting A branch: j2 matches, Alice used ka and Bob kb, key = j1.
inline std::vector<SiftOutcome> sifting_a_branch(const SicCompound& c, int j2, int ka, int kb) {
  std::vector<SiftOutcome> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      out.push_back({c.state(from_latin({a, j2, ka})), c.state(from_latin({b, j2, kb})), a, b});
  return out;
}

inline int branch_count(Protocol p) {
  switch (p) {
    case Protocol::SiftingA: return 4 * 12;
    case Protocol::SiftingB: return 16;
    default: throw InvalidParams(to_string(p) + " has no sifting branches");
  }
}

/// Representative branch: Sifting B (j1, j2) = (0, 0); Sifting A j2 = 0, (ka, kb) = (0, 1).
inline SiftedState sift(const NoiseParams& n, Protocol protocol, const SicCompound& c) {
  const Matrix rho = family_state(n);
  switch (protocol) {
    case Protocol::SiftingB: return sift_outcomes(rho, sifting_b_branch(c, 0, 0), 16);
    case Protocol::SiftingA: return sift_outcomes(rho, sifting_a_branch(c, 0, 0, 1), 48);
    default: throw InvalidParams(to_string(protocol) + " is not a sifting protocol");
  }
}

inline SiftedState sift(const NoiseParams& n, Protocol protocol) {
  static const SicCompound c = build_compound();
  return sift(n, protocol, c);
}

/// H(K_A|E) - H(K_A|K_B) on sigma_{K_A K_B E}.
inline double key_rate(const SiftedState& s) {
  std::array<double, 16> joint{};
  std::array<double, 4> bob{};
  double h_ae = 0.0;
  Matrix env = Matrix::Zero(s.env_dim(), s.env_dim());
  for (int a = 0; a < 4; ++a) {
    Matrix given_a = Matrix::Zero(s.env_dim(), s.env_dim());
    for (int b = 0; b < 4; ++b) {
      given_a += s.blocks[a][b];
      joint[a * 4 + b] = s.key_prob(a, b);
      bob[b] += s.key_prob(a, b);
    }
    h_ae += spectral_entropy(given_a);
    env += given_a;
  }
  const double h_a_given_e = h_ae - spectral_entropy(env);
  const double h_a_given_b = shannon_entropy(joint) - shannon_entropy(bob);
  return h_a_given_e - h_a_given_b;
}

struct BranchSpread {
  int branches = 0;
  double rate_spread = 0.0;
  double success_spread = 0.0;
  double key_distribution_spread = 0.0;  // sorted joint key distributions
};

/// Evaluates every sifting-success branch and reports how far they differ.
inline BranchSpread branch_equivalence(const NoiseParams& n, Protocol protocol,
                                       const SicCompound& c) {
  const Matrix rho = family_state(n);
  std::vector<SiftedState> all;
  if (protocol == Protocol::SiftingB) {
    for (int j1 = 0; j1 < 4; ++j1)
      for (int j2 = 0; j2 < 4; ++j2) all.push_back(sift_outcomes(rho, sifting_b_branch(c, j1, j2), 16));
  } else if (protocol == Protocol::SiftingA) {
    for (int j2 = 0; j2 < 4; ++j2)
      for (int ka = 0; ka < 4; ++ka)
        for (int kb = 0; kb < 4; ++kb)
          if (ka != kb) all.push_back(sift_outcomes(rho, sifting_a_branch(c, j2, ka, kb), 48));
  } else {
    throw InvalidParams(to_string(protocol) + " is not a sifting protocol");
  }
  auto sorted_keys = [](const SiftedState& s) {
    std::vector<double> v;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) v.push_back(s.key_prob(a, b));
    std::sort(v.begin(), v.end());
    return v;
  };
  BranchSpread out;
  out.branches = static_cast<int>(all.size());
  const double r0 = key_rate(all.front());
  const auto k0 = sorted_keys(all.front());
  for (const auto& s : all) {
    out.rate_spread = std::max(out.rate_spread, std::abs(key_rate(s) - r0));
    out.success_spread = std::max(out.success_spread, std::abs(s.success_prob - all.front().success_prob));
    const auto k = sorted_keys(s);
    for (std::size_t i = 0; i < k.size(); ++i)
      out.key_distribution_spread = std::max(out.key_distribution_spread, std::abs(k[i] - k0[i]));
  }
  return out;
}

/// Computational-basis key on the isotropic state v Phi + (1 - v) pi, v = 1 - p - q.
inline double five_mub_rate(const NoiseParams& n) {
  validate(n);
  const double v = 1.0 - n.p - n.q;
  const Matrix rho = v * maximally_entangled() + (1.0 - v) * maximally_mixed();
  std::vector<SiftOutcome> outcomes;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      outcomes.push_back({Vector::Unit(4, a), Vector::Unit(4, b), a, b});
  return key_rate(sift_outcomes(rho, outcomes, 1));
}

/// H(B) - H(AB) of the family state.
inline double coherent_information(const NoiseParams& n) {
  const Matrix rho = family_state(n);
  return spectral_entropy(partial_trace_a(rho, kLocalDim, kLocalDim)) - spectral_entropy(rho);
}

/// Bits per sifted symbol (sifting protocols) or per pair (the others).
inline double rate(Protocol protocol, const NoiseParams& n) {
  switch (protocol) {
    case Protocol::SiftingA:
    case Protocol::SiftingB: return key_rate(sift(n, protocol));
    case Protocol::FiveMUB: return five_mub_rate(n);
    case Protocol::CoherentInfo: return coherent_information(n);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Parameter estimation

/// Observable frequencies: k agreement among Sifting B rounds and the
/// per-round Sifting A success probability (all branches).
struct Statistics {
  double k_agreement = 0.0;
  double sifting_a_success = 0.0;
};

inline Statistics forward_statistics(const NoiseParams& n) {
  const auto b = sift(n, Protocol::SiftingB);
  Statistics s;
  for (int k = 0; k < 4; ++k) s.k_agreement += b.key_prob(k, k);
  s.sifting_a_success = sift(n, Protocol::SiftingA).success_prob;
  return s;
}

inline constexpr double kEstimateTolerance = 1e-9;

/// Both statistics are affine in (p, q); the map is inverted exactly.
inline NoiseParams estimate_params(const Statistics& observed) {
  const Statistics s0 = forward_statistics({0.0, 0.0});
  const Statistics sp = forward_statistics({1.0, 0.0});
  const Statistics sq = forward_statistics({0.0, 1.0});
  Eigen::Matrix2d jac;
  jac << sp.k_agreement - s0.k_agreement, sq.k_agreement - s0.k_agreement,
      sp.sifting_a_success - s0.sifting_a_success, sq.sifting_a_success - s0.sifting_a_success;
  if (std::abs(jac.determinant()) < 1e-14) throw Infeasible("statistics do not determine (p, q)");
  const Eigen::Vector2d rhs(observed.k_agreement - s0.k_agreement,
                            observed.sifting_a_success - s0.sifting_a_success);
  const Eigen::Vector2d pq = jac.fullPivLu().solve(rhs);
  NoiseParams n{pq(0), pq(1)};
  if (n.p < -kEstimateTolerance || n.q < -kEstimateTolerance ||
      n.p + n.q > 1.0 + kEstimateTolerance) {
    throw Infeasible("statistics correspond to p = " + std::to_string(n.p) +
                     ", q = " + std::to_string(n.q) + ", outside the family");
  }
  n.p = std::clamp(n.p, 0.0, 1.0);
  n.q = std::clamp(n.q, 0.0, 1.0 - n.p);
  return n;
}

// ---------------------------------------------------------------------------
// Zero-rate contours

enum class ContourStatus { Ok, NoSignChange, PositiveEverywhere };

inline std::string to_string(ContourStatus s) {
  switch (s) {
    case ContourStatus::Ok: return "ok";
    case ContourStatus::NoSignChange: return "no_sign_change";
    case ContourStatus::PositiveEverywhere: return "positive_everywhere";
  }
  return "unknown";
}

struct ContourPoint {
  double q = 0.0;
  std::optional<double> p_zero;
  ContourStatus status = ContourStatus::Ok;
};

struct RateCurve {
  Protocol protocol = Protocol::SiftingB;
  std::vector<ContourPoint> points;  // sorted by q

  std::string to_csv() const;
};

inline constexpr int kContourPrescan = 20;
inline constexpr double kContourResolution = 1e-6;

/// Rates at or below this are treated as zero when locating sign changes.
inline constexpr double kRateFloor = 1e-12;

inline ContourPoint zero_rate_point(Protocol protocol, double q) {
  ContourPoint pt;
  pt.q = q;
  const double top = 1.0 - q;
  auto f = [&](double p) { return rate(protocol, {std::clamp(p, 0.0, top), q}); };
  double lo = 0.0, f_lo = f(0.0);
  if (f_lo <= kRateFloor) {
    pt.status = ContourStatus::NoSignChange;
    return pt;
  }
  std::optional<double> hi;
  for (int i = 1; i <= kContourPrescan; ++i) {
    const double p = top * i / kContourPrescan;
    if (f(p) <= kRateFloor) {
      hi = p;
      break;
    }
    lo = p;
  }
  if (!hi) {
    pt.status = ContourStatus::PositiveEverywhere;
    return pt;
  }
  double h = *hi;
  while (h - lo > kContourResolution) {
    const double mid = 0.5 * (lo + h);
    (f(mid) > kRateFloor ? lo : h) = mid;
  }
  pt.p_zero = 0.5 * (lo + h);
  return pt;
}

inline std::string RateCurve::to_csv() const {
  std::string out = "q,p_zero,status\n";
  for (const auto& pt : points) {
    out += format_number(pt.q) + "," + (pt.p_zero ? format_number(*pt.p_zero) : std::string()) +
           "," + to_string(pt.status) + "\n";
  }
  return out;
}

inline RateCurve zero_rate_contour(Protocol protocol, std::vector<double> q_grid) {
  std::sort(q_grid.begin(), q_grid.end());
  RateCurve curve;
  curve.protocol = protocol;
  for (double q : q_grid) {
    if (q < 0.0 || q > 1.0) throw InvalidParams("q outside [0, 1]");
    curve.points.push_back(zero_rate_point(protocol, q));
  }
  return curve;
}

/// q where the rate crosses zero along p = p_fixed.
inline double threshold_q(Protocol protocol, double p_fixed = 0.0) {
  auto f = [&](double q) { return rate(protocol, {p_fixed, q}); };
  double lo = 0.0, hi = 1.0 - p_fixed;
  if (f(lo) <= 0.0 || f(hi) > 0.0) throw NoSignChange("rate does not change sign in q");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace siccompound
