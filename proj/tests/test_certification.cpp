#include <gtest/gtest.h>

#include "siccompound/certification.hpp"
#include "siccompound/compound.hpp"

using namespace siccompound;

TEST(Certification, AnalyticBounds) {
  EXPECT_NEAR(analytic_bound(2), 0.5 * std::sqrt(96.0) + 8.0, 1e-12);
  EXPECT_NEAR(analytic_bound(2), 12.8989794856, 1e-9);
  EXPECT_NEAR(analytic_bound(3), 0.5 * std::sqrt(3888.0) + 39.0, 1e-12);
  EXPECT_NEAR(analytic_bound(4), 0.5 * std::sqrt(46080.0) + 124.0, 1e-12);
  EXPECT_NEAR(analytic_bound(4), 231.33126292, 1e-7);
}

TEST(Certification, SingleSicScore) {
  const auto c = build_qubit_compound();
  std::vector<Vector> sic;
  for (int j1 = 0; j1 < 2; ++j1)
    for (int j2 = 0; j2 < 2; ++j2) sic.push_back(c.state(j1, j2, 0));
  const auto m = sic_game_model(sic);
  EXPECT_NEAR(eval_S_prime(m), 6.0 + 6.0 * std::sqrt(2.0 / 3.0), 1e-9);
  EXPECT_NEAR(eval_S(m), analytic_bound(2), 1e-9);
}

TEST(Certification, TrivialMeasurementsScorePairCount) {
  const auto c = build_qubit_compound();
  std::vector<Vector> sic;
  for (int j1 = 0; j1 < 2; ++j1)
    for (int j2 = 0; j2 < 2; ++j2) sic.push_back(c.state(j1, j2, 0));
  auto m = sic_game_model(sic);
  for (auto& b : m.binary[0]) b = Matrix::Identity(2, 2) / 2.0;
  EXPECT_NEAR(eval_S_prime(m), 6.0, 1e-12);
}

TEST(Certification, OrthogonalPairScoresTwo) {
  PrepareMeasureModel m;
  m.dim = 2;
  Vector e0 = Vector::Zero(2), e1 = Vector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  m.states = {{projector(e0), projector(e1), projector(e0), projector(e1)}};
  m.binary = {helstrom_measurements(m.states[0])};
  m.tomographic = {std::vector<Matrix>(4, Matrix::Identity(2, 2) / 4.0)};
  // pairs (0,1) and (2,3) and (1,2) and (0,3) are orthogonal, (0,2) and (1,3) identical
  EXPECT_NEAR(eval_S_prime(m), 4 * 2.0 + 2 * 1.0, 1e-12);
}

TEST(Certification, CompoundModelsSaturate) {
  const auto q = compound_game_model(build_qubit_compound());
  EXPECT_NEAR(eval_penalty(q), 0.0, 1e-12);
  EXPECT_NEAR(eval_H(q), analytic_bound(2), 1e-6);
  const auto c = compound_game_model(build_compound());
  EXPECT_NEAR(eval_penalty(c), 0.0, 1e-12);
  EXPECT_NEAR(eval_H(c), analytic_bound(4), 1e-6);
}

TEST(Certification, InvalidModels) {
  auto m = compound_game_model(build_qubit_compound());
  m.tomographic[0][0] *= 2.0;
  EXPECT_THROW(eval_H(m), InvalidModel);
  auto n = compound_game_model(build_qubit_compound());
  n.states[1].pop_back();
  EXPECT_THROW(eval_H(n), InvalidModel);
  auto p = compound_game_model(build_qubit_compound());
  p.binary[0][0] = 2.0 * Matrix::Identity(2, 2);
  EXPECT_THROW(eval_S(p), InvalidModel);
  auto s = compound_game_model(build_qubit_compound());
  s.states.pop_back();
  s.binary.pop_back();
  s.tomographic.pop_back();
  EXPECT_THROW(eval_H(s), InvalidModel);
}

TEST(Certification, QubitSeesawReachesBound) {
  double best = 0.0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto r = seesaw_maximize_H(2, seed);
    best = std::max(best, r.value);
    EXPECT_LE(r.value, analytic_bound(2) + 1e-9);
    EXPECT_NO_THROW(validate_model(r.model, 1e-9));
    EXPECT_NEAR(eval_H(r.model), r.value, 1e-9);
  }
  EXPECT_GE(best, 12.898);
}

TEST(Certification, SeesawTrajectoryMonotone) {
  const auto r = seesaw_maximize_H(3, 5, {200, 1e-10});
  ASSERT_GE(r.trajectory.size(), 2u);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i)
    EXPECT_GE(r.trajectory[i], r.trajectory[i - 1] - 1e-9);
  EXPECT_LT(r.value, analytic_bound(3));
}

TEST(Certification, SeesawDeterministic) {
  const auto a = seesaw_maximize_H(2, 42, {50, 1e-10});
  const auto b = seesaw_maximize_H(2, 42, {50, 1e-10});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.trajectory, b.trajectory);
}
