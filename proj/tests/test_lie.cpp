#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "loglin/errors.hpp"
#include "loglin/lie.hpp"
#include "oracles.hpp"

using namespace loglin;
using Eigen::Matrix3d;
using Eigen::Vector3d;
constexpr double kPi = std::numbers::pi;

namespace {

double max_abs(const Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Wedge, KnownMatrixForm) {
  Matrix3d expected;
  expected << 0, -0.5, 1, 0.5, 0, 2, 0, 0, 0;
  EXPECT_EQ(se2::wedge({1, 2, 0.5}), expected);
  EXPECT_EQ(se2::wedge(Vector3d::Zero()), Matrix3d::Zero());
}

TEST(Wedge, VeeIsExactInverse) {
  const Vector3d z(-3.2, 0.7, -1.1);
  EXPECT_EQ(se2::vee(se2::wedge(z)), z);
  EXPECT_EQ(se2::vee(Matrix3d::Zero()), Vector3d::Zero());
  Matrix3d m;
  m << 0, -0.5, 1, 0.5, 0, 2, 0, 0, 0;
  EXPECT_EQ(se2::vee(m), Vector3d(1, 2, 0.5));
}

TEST(Wedge, VeeRejectsNonAlgebraMatrices) {
  Matrix3d m = se2::wedge({1, 2, 0.5});
  m(2, 0) = 1e-3;
  EXPECT_THROW(se2::vee(m), StructureViolation);
  m = se2::wedge({1, 2, 0.5});
  m(0, 1) += 1e-6;  // no longer skew
  EXPECT_THROW(se2::vee(m), StructureViolation);
  m = se2::wedge({1, 2, 0.5});
  m(0, 0) = 1e-9;
  EXPECT_THROW(se2::vee(m), StructureViolation);
}

TEST(Exp, IdentityAndPureTranslation) {
  EXPECT_LT(max_abs(se2::exp(Vector3d::Zero()).matrix() - Matrix3d::Identity()), 1e-15);
  const SE2 X = se2::exp({1, 0, 0});
  EXPECT_DOUBLE_EQ(X.angle(), 0.0);
  EXPECT_DOUBLE_EQ(X.translation().x(), 1.0);
  EXPECT_DOUBLE_EQ(X.translation().y(), 0.0);
}

TEST(Exp, QuarterTurnMatchesMatrixExponential) {
  const Vector3d z(0, 0, kPi / 2);
  const Matrix3d ref = oracle::expm(oracle::hat(z));
  EXPECT_LT(max_abs(se2::exp(z).matrix() - ref), 1e-14);
  EXPECT_LT(se2::exp(z).translation().norm(), 1e-15);
}

TEST(Exp, RandomAlgebraElementsMatchMatrixExponential) {
  oracle::Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    Vector3d z = rng.vec(-3, 3);
    if (i % 4 == 0) z(2) *= 1e-5;  // Taylor branch
    const Matrix3d ref = oracle::expm(oracle::hat(z));
    EXPECT_LT(max_abs(se2::exp(z).matrix() - ref), 1e-13) << z.transpose();
  }
}

TEST(Exp, ContinuousAcrossSeriesThreshold) {
  for (double t : {0.99e-4, 1.0e-4, 1.01e-4, -1e-4, 3e-4}) {
    const Vector3d z(0.7, -1.3, t);
    EXPECT_LT(max_abs(se2::exp(z).matrix() - oracle::expm(oracle::hat(z))), 2e-16 * 8);
  }
}

TEST(Log, IdentityAndRoundTrip) {
  EXPECT_EQ(se2::log(SE2::Identity()), Vector3d::Zero());
  const Vector3d z(0.3, -0.2, 0.9);
  EXPECT_LT((se2::log(se2::exp(z)) - z).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Log, BranchGuard) {
  EXPECT_THROW(se2::log(SE2(kPi - 1e-12, {1, 0})), BranchSingularity);
  EXPECT_THROW(se2::log(SE2(-kPi + 1e-7, {0, 0})), BranchSingularity);
  EXPECT_NO_THROW(se2::log(SE2(kPi - 1e-5, {0, 0})));
}

TEST(Log, ExpLogExpOnGrid) {
  oracle::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    Vector3d z = rng.vec(-5, 5);
    z(2) = rng.uniform(-(kPi - 0.01), kPi - 0.01);
    const Matrix3d X = se2::exp(z).matrix();
    EXPECT_LT(max_abs(se2::exp(se2::log(se2::exp(z))).matrix() - X), 1e-9);
    EXPECT_LT((oracle::logm(X) - se2::log(se2::exp(z))).norm(), 1e-9);
  }
}

TEST(SE2Type, FromMatrixValidatesStructure) {
  const Matrix3d m = oracle::pose(0.4, 1, 2);
  EXPECT_NEAR(SE2::FromMatrix(m).angle(), 0.4, 1e-15);
  Matrix3d bad = m;
  bad(0, 0) *= 1.01;
  EXPECT_THROW(SE2::FromMatrix(bad), InvalidArgument);
  bad = m;
  bad(2, 1) = 0.1;
  EXPECT_THROW(SE2::FromMatrix(bad), InvalidArgument);
}

TEST(SE2Type, GroupOperationsMatchMatrices) {
  oracle::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const SE2 A(rng.uniform(-4, 4), rng.vec2(-5, 5)), B(rng.uniform(-4, 4), rng.vec2(-5, 5));
    EXPECT_LT(max_abs((A * B).matrix() - A.matrix() * B.matrix()), 1e-12);
    EXPECT_LT(max_abs(A.inverse().matrix() - A.matrix().inverse()), 1e-12);
    const Eigen::Matrix2d R = A.rotation();
    EXPECT_LT((R.transpose() * R - Eigen::Matrix2d::Identity()).norm(), 1e-15);
    EXPECT_GT(A.angle(), -kPi);
    EXPECT_LE(A.angle(), kPi);
  }
}

TEST(Adjoint, IdentityRotationAndTranslation) {
  EXPECT_EQ(se2::adjoint(SE2::Identity()), Matrix3d::Identity());

  const double phi = 0.8;
  Matrix3d rot = Matrix3d::Identity();
  rot.topLeftCorner<2, 2>() = rotation2d(phi);
  EXPECT_LT(max_abs(se2::adjoint(SE2(phi, {0, 0})) - rot), 1e-15);

  Matrix3d tr;
  tr << 1, 0, 2, 0, 1, -1, 0, 0, 1;
  EXPECT_EQ(se2::adjoint(SE2(0, {1, 2})), tr);
}

TEST(Adjoint, DefiningRelationAndHomomorphism) {
  oracle::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const SE2 X(rng.uniform(-3, 3), rng.vec2(-4, 4)), Y(rng.uniform(-3, 3), rng.vec2(-4, 4));
    const Vector3d w = rng.vec(-2, 2);
    const Matrix3d lhs = se2::wedge(se2::adjoint(X) * w);
    const Matrix3d rhs = X.matrix() * oracle::hat(w) * X.matrix().inverse();
    EXPECT_LT(max_abs(lhs - rhs), 1e-9);
    EXPECT_LT(max_abs(se2::adjoint(X * Y) - se2::adjoint(X) * se2::adjoint(Y)), 1e-9);
  }
}

TEST(AlgebraAdjoint, BlockForm) {
  EXPECT_EQ(se2::ad(Vector3d::Zero()), Matrix3d::Zero());
  Matrix3d expected;
  expected << 0, -0.5, 2, 0.5, 0, -1, 0, 0, 0;
  EXPECT_EQ(se2::ad({1, 2, 0.5}), expected);
}

TEST(AlgebraAdjoint, MatchesCommutator) {
  EXPECT_LT((se2::ad({1, 0, 0}) * Vector3d(0, 0, 1) - Vector3d(0, -1, 0)).norm(), 1e-15);
  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vector3d z = rng.vec(-3, 3);
    EXPECT_LT(max_abs(se2::ad(z) - oracle::bracket_ad(z)), 1e-14);
  }
}

TEST(DexpSeries, TrivialCases) {
  EXPECT_EQ(se2::dexp_series(Vector3d::Zero()), Matrix3d::Identity());
  EXPECT_EQ(se2::dexp_series({1, 2, 3}, 1), Matrix3d::Identity());
  EXPECT_THROW(se2::dexp_series({1, 2, 3}, 0), InvalidArgument);
}

TEST(DexpSeries, ConvergesWithTerms) {
  const Vector3d z(0.1, 0.2, 0.3);
  EXPECT_LT(max_abs(se2::dexp_series(z, 20) - se2::dexp_series(z, 40)), 1e-14);
  EXPECT_LT(max_abs(se2::dexp_series(z) - oracle::phi1(-oracle::bracket_ad(z))), 1e-15);
}

// d/dt exp(z0 + t delta) = exp(z0) wedge(dexp(z0) delta), to O(h^2).
TEST(DexpSeries, FiniteDifferenceOfExponential) {
  oracle::Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const Vector3d z0 = rng.vec(-2, 2), delta = rng.vec(-1, 1);
    const Matrix3d predicted = oracle::expm(oracle::hat(z0)) * se2::wedge(se2::dexp_series(z0) * delta);
    double errs[2];
    const double hs[2] = {1e-3, 5e-4};
    for (int k = 0; k < 2; ++k) {
      const double h = hs[k];
      const Matrix3d fd = (oracle::expm(oracle::hat(z0 + h * delta)) - oracle::expm(oracle::hat(z0 - h * delta))) /
                          (2 * h);
      errs[k] = max_abs(fd - predicted);
    }
    EXPECT_LT(errs[0], 1e-5);
    EXPECT_NEAR(errs[0] / errs[1], 4.0, 0.2);  // second order in h
  }
}

TEST(LeftDistortionInv, Examples) {
  EXPECT_EQ(se2::left_distortion_inv(Vector3d::Zero()), -Matrix3d::Identity());
  EXPECT_NEAR(se2::left_distortion_inv({0, 0, kPi}).determinant(), -4 / (kPi * kPi), 1e-12);
  const Vector3d z(0.3, -0.1, 0.7);
  const Matrix3d series = -oracle::phi1(oracle::bracket_ad(z));
  EXPECT_LT(max_abs(se2::left_distortion_inv(z) - series), 1e-12);
  EXPECT_LT(max_abs(se2::left_distortion_inv_series(z) - series), 1e-14);
}

TEST(LeftDistortionInv, ClosedFormMatchesSeriesOnGrid) {
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      for (int k = 0; k < 10; ++k) {
        const Vector3d z(-1 + 2.0 * i / 9, -1 + 2.0 * j / 9, -3 + 6.0 * k / 9);
        const Matrix3d series = -oracle::phi1(oracle::bracket_ad(z));
        EXPECT_LT(max_abs(se2::left_distortion_inv(z) - series), 1e-10);
        const double det = se2::left_distortion_inv(z).determinant();
        EXPECT_LE(std::abs(det), 1.0 + 1e-12);
        EXPECT_GE(std::abs(det), 4 / (kPi * kPi) - 1e-12);
      }
    }
  }
}

TEST(LeftDistortionInv, DeterminantFormulaAndTaylor) {
  for (double t : {1e-3, 0.1, 1.0, 2.5, -2.0, kPi}) {
    const double det = se2::left_distortion_inv({0.4, -0.3, t}).determinant();
    EXPECT_NEAR(det, 2 * (std::cos(t) - 1) / (t * t), 1e-10);
  }
  for (double t : {1e-2, 5e-2, 0.1, 0.2}) {
    const double det = se2::left_distortion_inv({0.4, -0.3, t}).determinant();
    const double taylor = -1 + t * t / 12 - std::pow(t, 4) / 360;
    EXPECT_LE(std::abs(det - taylor), std::pow(t, 6));
  }
}

TEST(LeftDistortionInv, StableJustAboveSeriesThreshold) {
  for (double t : {1.0001e-4, 2e-4, 1e-3, 1e-2}) {
    const Vector3d z(0.2, -0.7, t);
    EXPECT_LT(max_abs(se2::left_distortion_inv(z) + oracle::phi1(oracle::bracket_ad(z))), 1e-15);
    EXPECT_LT(max_abs(se2::left_distortion(z) * se2::left_distortion_inv(z) - Matrix3d::Identity()), 1e-15);
  }
}

TEST(LeftDistortion, Examples) {
  EXPECT_LT(max_abs(se2::left_distortion(Vector3d::Zero()) + Matrix3d::Identity()), 1e-15);

  const Matrix3d U = se2::left_distortion({0, 0, kPi / 2});
  EXPECT_NEAR(U(0, 0), -kPi / 4, 1e-14);
  EXPECT_NEAR(U(1, 1), -kPi / 4, 1e-14);
  EXPECT_NEAR(U(1, 0), kPi / 4, 1e-14);
  EXPECT_NEAR(U(0, 1), -kPi / 4, 1e-14);
  EXPECT_LT(max_abs(U - se2::left_distortion_inv({0, 0, kPi / 2}).inverse()), 1e-14);

  const Vector3d z(0.5, 0.2, -0.4);
  EXPECT_LT(max_abs(se2::left_distortion(z) * se2::left_distortion_inv(z) - Matrix3d::Identity()), 1e-10);
}

TEST(LeftDistortion, InversePairAndBottomRow) {
  oracle::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    Vector3d z = rng.vec(-2, 2);
    z(2) = rng.uniform(-(kPi - 1e-3), kPi - 1e-3);
    if (i % 5 == 0) z(2) *= 1e-6;
    const Matrix3d U = se2::left_distortion(z);
    EXPECT_LT(max_abs(U * se2::left_distortion_inv(z) - Matrix3d::Identity()), 1e-9);
    EXPECT_EQ(U.row(2), Eigen::RowVector3d(0, 0, -1));
  }
}

TEST(LeftDistortion, BranchGuard) {
  EXPECT_THROW(se2::left_distortion({0, 0, kPi}), BranchSingularity);
  EXPECT_THROW(se2::left_distortion({0, 0, -kPi + 1e-7}), BranchSingularity);
}

TEST(RightDistortion, Examples) {
  EXPECT_LT(max_abs(se2::right_distortion_inv(Vector3d::Zero()) + Matrix3d::Identity()), 1e-15);
  EXPECT_LT(max_abs(se2::right_distortion(Vector3d::Zero()) + Matrix3d::Identity()), 1e-15);
  const Vector3d z(0.2, 0.1, 0.6);
  EXPECT_LT(max_abs(se2::right_distortion(z) - se2::left_distortion(-z)), 1e-10);
  EXPECT_LT(max_abs(se2::right_distortion_inv_series({1, 1, 1}, 30) - se2::right_distortion_inv_series({1, 1, 1}, 40)),
            1e-13);
  EXPECT_LT(max_abs(se2::right_distortion_inv(z) + oracle::phi1(-oracle::bracket_ad(z))), 1e-14);
}

TEST(RightDistortion, IllConditionedNearBranch) {
  // det(U_r^-1) = 2 (cos t - 1) / t^2 stays away from zero on [-pi, pi]; far
  // outside that range the series inverse degenerates at t = 2 pi.
  EXPECT_NO_THROW(se2::right_distortion({0.1, 0.1, kPi}));
  EXPECT_THROW(se2::right_distortion({0, 0, 2 * kPi}), BranchSingularity);
}
