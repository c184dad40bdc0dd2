#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "loglin/errors.hpp"
#include "loglin/invariant_set.hpp"
#include "loglin/pipeline.hpp"
#include "loglin/scenario.hpp"
#include "oracles.hpp"

using namespace loglin;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

const Synthesis& small_synthesis() {
  static const Synthesis syn = synthesize(load_scenario(LOGLIN_SCENARIO_DIR "/small_disturbance.json"));
  return syn;
}

const Algorithm1Result& small_inversion() {
  static const Algorithm1Result r = algorithm1(small_synthesis().system);
  return r;
}

InvariantEllipsoid ball(double radius) {
  InvariantEllipsoid E;
  E.P = Matrix3d::Identity() / (radius * radius);
  return E;
}

double sigma_u(const AlgebraVector& z) {
  return Eigen::JacobiSVD<Matrix3d>(se2::left_distortion(z)).singularValues()(0);
}

}  // namespace

TEST(Sampling, FibonacciSphereIsUnitAndSpread) {
  const auto pts = fibonacci_sphere(500);
  ASSERT_EQ(pts.size(), 500u);
  Vector3d mean = Vector3d::Zero();
  for (const auto& p : pts) {
    EXPECT_NEAR(p.norm(), 1.0, 1e-12);
    mean += p / 500.0;
  }
  EXPECT_LT(mean.norm(), 1e-2);
  EXPECT_THROW(fibonacci_sphere(0), InvalidArgument);
}

TEST(Sampling, BoundaryPointsLieOnTheEllipsoid) {
  Matrix3d P;
  P << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  for (const auto& z : ellipsoid_boundary(P, 300)) EXPECT_NEAR(z.dot(P * z), 1.0, 1e-12);
  EXPECT_THROW(ellipsoid_boundary(-P, 10), InvalidArgument);
}

TEST(SigmaMax, Examples) {
  // A vanishing set sees only U_l(0) = -I.
  EXPECT_NEAR(sigma_max_over_ellipsoid(ball(1e-9)), kSampleMargin, 1e-9);
  const double s = sigma_max_over_ellipsoid(ball(0.1));
  EXPECT_GE(s, kSampleMargin);
  EXPECT_LE(s, 1.1);
}

// The margin covers the gaps between the 2000 samples.
TEST(SigmaMax, DominatesDenseSampling) {
  const InvariantEllipsoid& E = small_inversion().ellipsoid;
  oracle::Rng rng(51);
  double dense = 0;
  for (int i = 0; i < 100000; ++i) {
    Vector3d d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (d.norm() < 1e-6) continue;
    dense = std::max(dense, sigma_u(d / std::sqrt(d.dot(E.P * d))));
  }
  const double s = sigma_max_over_ellipsoid(E);
  EXPECT_GE(s, dense);
  EXPECT_LE(s, kSampleMargin * dense + 1e-3);
}

TEST(SigmaMax, RejectsSetsPastTheHeadingGuard) {
  InvariantEllipsoid E;
  E.P = Vector3d(1, 1, 1 / 10.0).asDiagonal();
  EXPECT_THROW(sigma_max_over_ellipsoid(E), AngleWrap);
  EXPECT_NO_THROW(check_angle_guard(Vector3d(1, 1, 1 / 9.0).asDiagonal().toDenseMatrix()));
}

TEST(Algorithm1, NoDisturbanceIsOneSolve) {
  PolytopicSystem sys = small_synthesis().system;
  sys.w_bound.setZero();
  const Algorithm1Result r = algorithm1(sys);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.ellipsoid.capped);
}

TEST(Algorithm1, SmallScenarioConverges) {
  const Algorithm1Result& r = small_inversion();
  EXPECT_LE(r.iterations, 10);
  EXPECT_GE(r.sigma_final, r.sigma_max);
  EXPECT_LT(r.sigma_final - r.sigma_max, 1e-3);
  EXPECT_EQ(r.history.size(), static_cast<std::size_t>(r.iterations));
  EXPECT_NEAR(r.ellipsoid.rho, r.sigma_final * small_synthesis().system.w_bound.norm(), 1e-12);
  // Frozen from a verified run.
  EXPECT_EQ(r.iterations, 5);
  EXPECT_NEAR(r.sigma_final, 1.130313, 1e-5);
  EXPECT_NEAR(r.ellipsoid.geometric_mean_semi_axis(), 0.299559, 1e-5);
}

TEST(Algorithm1, GrowsWithDisturbance) {
  PolytopicSystem sys = small_synthesis().system;
  const Vector3d w0 = sys.w_bound;
  double prev = 0;
  for (double scale : {0.01, 0.1, 0.3, 0.6, 1.0}) {
    sys.w_bound = scale * w0;
    const double gm = algorithm1(sys).ellipsoid.geometric_mean_semi_axis();
    EXPECT_GT(gm, prev);
    prev = gm;
  }
}

TEST(Algorithm1, OptionChecks) {
  Algorithm1Options opt;
  opt.sigma0 = 0.5;
  EXPECT_THROW(algorithm1(small_synthesis().system, opt), InvalidArgument);
  opt = {};
  opt.max_iter = 1;
  EXPECT_THROW(algorithm1(small_synthesis().system, opt), NoConvergence);
}

TEST(NoInversion, ZeroGainMatchesAlgorithm1) {
  PolytopicSystem sys = small_synthesis().system;
  ControlConfig cfg = small_synthesis().control;
  cfg.K.setZero();
  const Algorithm1Result a = algorithm1(sys);
  const Algorithm1Result b = no_inversion_ellipsoid(sys, cfg);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_LT((a.ellipsoid.P - b.ellipsoid.P).norm(), 1e-12);
  EXPECT_EQ(b.beta, 0.0);
}

TEST(NoInversion, LargerThanInversionSet) {
  const Algorithm1Result r = no_inversion_ellipsoid(small_synthesis().system, small_synthesis().control);
  EXPECT_GE(r.beta, 0.0);
  for (const auto& rec : r.history) EXPECT_GE(rec.beta_max, 0.0);
  const double ratio = r.ellipsoid.geometric_mean_semi_axis() / small_inversion().ellipsoid.geometric_mean_semi_axis();
  EXPECT_GE(ratio, 1.5);
  EXPECT_NEAR(r.ellipsoid.geometric_mean_semi_axis(), 0.472466, 1e-5);
}

TEST(NoInversionBound, ZeroAtTheOrigin) {
  EXPECT_LT(no_inversion_bound(ball(1e-9), small_synthesis().control), 1e-12);
  EXPECT_GT(no_inversion_bound(ball(0.5), small_synthesis().control), 0.0);
}

TEST(SaturationBox, Cases) {
  ControlConfig cfg;
  cfg.K = -2 * Matrix3d::Identity();
  // No-inversion law is u = 2 zeta, exactly 2 r on the ball boundary.
  const SaturationBox nb = saturation_box(ball(0.5), cfg, ControlMode::NoInversion);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(nb.bound(i), kSampleMargin * 1.0 + 1e-12);
    EXPECT_GE(nb.bound(i), 0.99);
  }
  EXPECT_TRUE(nb.contains(Vector3d(0.9, -0.9, 0.5)));
  EXPECT_FALSE(nb.contains(Vector3d(0, 1.1, 0)));
  cfg.K.setZero();
  EXPECT_EQ(saturation_box(ball(0.5), cfg).bound, Vector3d::Zero());
}
