#include <gtest/gtest.h>

#include <random>

#include "siccompound/qkd.hpp"

using namespace siccompound;

namespace {

const SicCompound& compound() {
  static const SicCompound c = build_compound();
  return c;
}

const ProjectiveUnitarySet& group() {
  static const ProjectiveUnitarySet g = automorphism_group();
  return g;
}

Matrix random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(kPairDim, kPairDim);
  for (int r = 0; r < kPairDim; ++r)
    for (int c = 0; c < kPairDim; ++c) a(r, c) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST(Qkd, ProtocolNames) {
  for (auto p : {Protocol::SiftingA, Protocol::SiftingB, Protocol::FiveMUB, Protocol::CoherentInfo})
    EXPECT_EQ(parse_protocol(to_string(p)), p);
  EXPECT_THROW(parse_protocol("bb84"), InvalidParams);
}

TEST(Qkd, ParameterValidation) {
  EXPECT_THROW(family_state({-0.1, 0.0}), InvalidParams);
  EXPECT_THROW(family_state({0.6, 0.6}), InvalidParams);
  EXPECT_NO_THROW(family_state({0.5, 0.5}));
  const Matrix rho = family_state({0.2, 0.3});
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_TRUE(is_positive_semidefinite(rho));
}

TEST(Qkd, FamilyCoordinatesRoundTrip) {
  const auto c = family_coordinates(family_state({0.17, 0.41}));
  EXPECT_NEAR(c.p, 0.17, 1e-12);
  EXPECT_NEAR(c.q, 0.41, 1e-12);
  EXPECT_LE(c.residual, 1e-12);
}

TEST(Qkd, TwirlFixesFamily) {
  const auto t = twirl(family_state({0.3, 0.2}), group());
  EXPECT_NEAR(t.p, 0.3, 1e-10);
  EXPECT_NEAR(t.q, 0.2, 1e-10);
  EXPECT_LE(t.residual, 1e-10);
}

TEST(Qkd, TwirlProjectsIntoFamily) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = twirl(random_density(rng), group());
    EXPECT_LE(t.residual, 1e-10);
    EXPECT_NEAR(t.state.trace().real(), 1.0, 1e-10);
    const auto again = twirl(t.state, group());
    EXPECT_TRUE(approx_equal(again.state, t.state, 1e-10));
  }
  EXPECT_THROW(twirl(Matrix::Identity(4, 4), group()), DimensionMismatch);
}

TEST(Qkd, SiftingBNoiseless) {
  const auto s = sift({0.0, 0.0}, Protocol::SiftingB, compound());
  EXPECT_NEAR(key_rate(s), 2.0, 1e-9);
  EXPECT_NEAR(s.success_prob, 1.0 / 16.0, 1e-12);
  for (int a = 0; a < 4; ++a) EXPECT_NEAR(s.key_prob(a, a), 0.25, 1e-12);
}

TEST(Qkd, SiftingBReferenceRates) {
  EXPECT_NEAR(rate(Protocol::SiftingB, {0.1, 0.1}), 0.7545640865979824, 1e-9);
  EXPECT_NEAR(rate(Protocol::SiftingB, {0.0, 0.2}), 0.5712457531982558, 1e-9);
}

TEST(Qkd, SiftingBBranchesAgree) {
  const auto b = branch_equivalence({0.1, 0.1}, Protocol::SiftingB, compound());
  EXPECT_EQ(b.branches, 16);
  EXPECT_LE(b.rate_spread, 1e-9);
  EXPECT_LE(b.success_spread, 1e-12);
  EXPECT_LE(b.key_distribution_spread, 1e-12);
}

TEST(Qkd, SiftingAReferenceRate) {
  EXPECT_NEAR(rate(Protocol::SiftingA, {0.1, 0.05}), 0.724415909702357, 1e-9);
  EXPECT_NEAR(rate(Protocol::SiftingA, {0.5, 0.02}), 0.1650635089355541, 1e-9);
  EXPECT_NEAR(rate(Protocol::SiftingA, {0.9, 0.01}), -0.07642261018929797, 1e-9);
}

TEST(Qkd, SiftingABranchesAgree) {
  const auto b = branch_equivalence({0.1, 0.05}, Protocol::SiftingA, compound());
  EXPECT_EQ(b.branches, 48);
  EXPECT_LE(b.rate_spread, 1e-9);
  EXPECT_LE(b.success_spread, 1e-12);
  EXPECT_THROW(branch_equivalence({0.1, 0.05}, Protocol::FiveMUB, compound()), InvalidParams);
}

TEST(Qkd, SiftingASuccessAffineInQ) {
  for (double q : {0.05, 0.1, 0.2, 0.3})
    EXPECT_NEAR(sift({0.1, q}, Protocol::SiftingA, compound()).success_prob, 0.15 + 0.0375 * q, 1e-12);
}

TEST(Qkd, FiveMubRates) {
  EXPECT_NEAR(rate(Protocol::FiveMUB, {0.1, 0.2}), 0.044038582556731765, 1e-9);
  EXPECT_NEAR(rate(Protocol::FiveMUB, {0.2, 0.1}), 0.044038582556731765, 1e-9);
  EXPECT_NEAR(rate(Protocol::FiveMUB, {0.0, 0.1}), 1.1848645179386719, 1e-9);
}

TEST(Qkd, CoherentInformation) {
  EXPECT_NEAR(coherent_information({0.1, 0.05}), 1.0885774395533332, 1e-9);
  EXPECT_NEAR(coherent_information({0.3, 0.2}), -0.3216764774866294, 1e-9);
  EXPECT_NEAR(coherent_information({0.0, 0.0}), 2.0, 1e-9);
}

TEST(Qkd, Thresholds) {
  EXPECT_NEAR(threshold_q(Protocol::SiftingB), 0.30898059896061253, 1e-8);
  EXPECT_NEAR(threshold_q(Protocol::FiveMUB), 0.30898059896061264, 1e-8);
  EXPECT_THROW(threshold_q(Protocol::SiftingB, 0.9), NoSignChange);
}

TEST(Qkd, ZeroRateContour) {
  const auto curve = zero_rate_contour(Protocol::SiftingB, {0.35, 0.0, 0.1});
  ASSERT_EQ(curve.points.size(), 3u);
  EXPECT_EQ(curve.points[0].q, 0.0);
  ASSERT_TRUE(curve.points[0].p_zero.has_value());
  EXPECT_NEAR(*curve.points[0].p_zero, 0.7151766532529785, 2e-6);
  ASSERT_TRUE(curve.points[1].p_zero.has_value());
  EXPECT_NEAR(*curve.points[1].p_zero, 0.3661, 1e-3);
  EXPECT_EQ(curve.points[2].status, ContourStatus::NoSignChange);
  EXPECT_FALSE(curve.points[2].p_zero.has_value());
  const std::string csv = curve.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "q,p_zero,status");
  EXPECT_NE(csv.find("0.35,,no_sign_change"), std::string::npos);
  EXPECT_THROW(zero_rate_contour(Protocol::SiftingB, {1.5}), InvalidParams);
}

TEST(Qkd, ForwardStatistics) {
  const auto s = forward_statistics({0.1, 0.1});
  EXPECT_NEAR(s.k_agreement, 0.865, 1e-12);
  EXPECT_NEAR(s.sifting_a_success, 0.15375, 1e-12);
}

TEST(Qkd, EstimateRoundTrip) {
  for (const NoiseParams n : {NoiseParams{0.1, 0.1}, NoiseParams{0.0, 0.0}, NoiseParams{0.3, 0.5},
                              NoiseParams{0.0, 1.0}, NoiseParams{1.0, 0.0}}) {
    const auto e = estimate_params(forward_statistics(n));
    EXPECT_NEAR(e.p, n.p, 1e-9);
    EXPECT_NEAR(e.q, n.q, 1e-9);
  }
  EXPECT_THROW(estimate_params({0.2, 0.5}), Infeasible);
}

TEST(Qkd, ZeroSuccessRejected) {
  EXPECT_THROW(sift_outcomes(family_state({0.0, 0.0}), {}, 1), ZeroSuccessProbability);
}

TEST(Qkd, RatesNonincreasingInQ) {
  for (auto protocol : {Protocol::SiftingA, Protocol::SiftingB}) {
    for (double p : {0.0, 0.2, 0.5}) {
      double previous = rate(protocol, {p, 0.0});
      for (double q = 0.05; q <= std::min(0.9, 1.0 - p) + 1e-12; q += 0.05) {
        const double r = rate(protocol, {p, std::min(q, 1.0 - p)});
        EXPECT_LE(r, previous + 1e-9) << to_string(protocol) << " p=" << p << " q=" << q;
        previous = r;
      }
    }
  }
}

TEST(Qkd, SiftingATurnsUpNearFullyMixed) {
  EXPECT_NEAR(rate(Protocol::SiftingA, {0.0, 0.95}), -1.6365128284729673, 1e-9);
  EXPECT_NEAR(rate(Protocol::SiftingA, {0.0, 1.0}), -1.6359570755829156, 1e-9);
  EXPECT_NEAR(rate(Protocol::SiftingB, {0.0, 1.0}), -2.0, 1e-9);
}

TEST(Qkd, BranchCovarianceAtRandomPoints) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int i = 0; i < 3; ++i) {
    const NoiseParams n{u(rng), u(rng)};
    for (auto protocol : {Protocol::SiftingA, Protocol::SiftingB}) {
      const auto b = branch_equivalence(n, protocol, compound());
      EXPECT_LE(b.rate_spread, 1e-9);
      EXPECT_LE(b.key_distribution_spread, 1e-12);
    }
  }
}

TEST(Qkd, SiftingAToleratesLargePAtSmallQ) {
  const auto curve = zero_rate_contour(Protocol::SiftingA, {0.0005, 0.01, 0.1});
  ASSERT_TRUE(curve.points[0].p_zero && curve.points[1].p_zero && curve.points[2].p_zero);
  EXPECT_GT(*curve.points[0].p_zero, 0.93);
  EXPECT_GT(*curve.points[0].p_zero, *curve.points[1].p_zero);
  EXPECT_GT(*curve.points[1].p_zero, *curve.points[2].p_zero);
  EXPECT_GT(rate(Protocol::SiftingA, {0.99, 0.0}), 0.0);
}

TEST(Qkd, FiveMubContourSymmetric) {
  const auto curve = zero_rate_contour(Protocol::FiveMUB, {0.1, 0.2});
  for (const auto& pt : curve.points) {
    ASSERT_TRUE(pt.p_zero.has_value());
    // the crossing (q, p0) reflects to (p0, q)
    EXPECT_NEAR(*zero_rate_point(Protocol::FiveMUB, *pt.p_zero).p_zero, pt.q, 1e-5);
  }
}
