#pragma once

#include <Eigen/Core>

namespace loglin {

/// Coordinates of an se(2) element, ordered (x, y, theta): translation first.
using AlgebraVector = Eigen::Vector3d;
/// 3x3 matrix form [[0, -w, vx], [w, 0, vy], [0, 0, 0]].
using AlgebraMatrix = Eigen::Matrix3d;
/// Linear operator acting on AlgebraVector coordinates.
using AdjointMatrix = Eigen::Matrix3d;

namespace se2 {

/// Below this |theta| the 0/0 closed forms switch to Taylor expansions.
inline constexpr double kSeriesThreshold = 1e-4;
/// Number of terms used by the ad-power series fallbacks.
inline constexpr int kSeriesTerms = 30;
/// Guard band around |theta| = pi for the logarithm and the distortion matrix.
inline constexpr double kBranchGuard = 1e-6;
/// Tolerance on the structural zeros accepted by vee().
inline constexpr double kStructureTol = 1e-12;

}  // namespace se2

/**
 * @brief Element of SE(2), the homogeneous matrix [[R, p], [0, 1]].
 *
 * Stored as a heading in (-pi, pi] and a translation, so every instance is on
 * the manifold by construction; matrix() assembles the 3x3 form on demand.
 */
class SE2 {
 public:
  SE2() = default;
  SE2(double theta, const Eigen::Vector2d& p);

  static SE2 Identity() { return SE2(); }

  /// Validates R^T R = I and det R = 1 within `tol`, and the bottom row.
  static SE2 FromMatrix(const Eigen::Matrix3d& m, double tol = 1e-9);

  double angle() const { return theta_; }
  const Eigen::Vector2d& translation() const { return p_; }
  Eigen::Matrix2d rotation() const;
  Eigen::Matrix3d matrix() const;

  SE2 inverse() const;
  SE2 operator*(const SE2& other) const;
  Eigen::Vector2d operator*(const Eigen::Vector2d& point) const;

 private:
  double theta_ = 0.0;
  Eigen::Vector2d p_ = Eigen::Vector2d::Zero();
};

Eigen::Matrix2d rotation2d(double theta);

namespace se2 {

AlgebraMatrix wedge(const AlgebraVector& z);

/// Throws StructureViolation unless `m` has the se(2) zero/skew pattern.
AlgebraVector vee(const AlgebraMatrix& m);

SE2 exp(const AlgebraVector& z);

/// Principal logarithm, theta in (-pi, pi). Throws BranchSingularity within
/// kBranchGuard of +-pi.
AlgebraVector log(const SE2& X);

/// Group adjoint: wedge(Ad(X) z) = X wedge(z) X^-1.
AdjointMatrix adjoint(const SE2& X);

/// Algebra adjoint ad(z) = [[w_x, (vy, -vx)^T], [0, 0]].
AdjointMatrix ad(const AlgebraVector& z);

/**
 * @brief Truncated series sum_{k < terms} (-1)^k ad(z)^k / (k+1)!.
 *
 * This is the left-trivialized derivative of the exponential,
 * (I - exp(-ad)) / ad: d/dt exp(z(t)) = exp(z) wedge(dexp_series(z) z').
 */
AdjointMatrix dexp_series(const AlgebraVector& z, int terms = kSeriesTerms);

/// -sum_{k < terms} ad(z)^k / (k+1)!, the inverse left distortion by series.
AdjointMatrix left_distortion_inv_series(const AlgebraVector& z, int terms = kSeriesTerms);

/// -sum_{k < terms} (-1)^k ad(z)^k / (k+1)!, the inverse right distortion.
AdjointMatrix right_distortion_inv_series(const AlgebraVector& z, int terms = kSeriesTerms);

/// Inverse of the left input distortion matrix U_l. Closed form for
/// |theta| >= kSeriesThreshold, series below. det = 2(cos theta - 1)/theta^2.
AdjointMatrix left_distortion_inv(const AlgebraVector& z);

/// Left input distortion matrix U_l = -ad e^{-ad} / (I - e^{-ad}), closed
/// form. Throws BranchSingularity for |theta| > pi - kBranchGuard.
AdjointMatrix left_distortion(const AlgebraVector& z);

AdjointMatrix right_distortion_inv(const AlgebraVector& z);

/// U_r = -ad / (I - e^{-ad}), by numerical inversion of the series form.
/// Throws BranchSingularity when the inverse is ill-conditioned (cond > 1e8).
AdjointMatrix right_distortion(const AlgebraVector& z);

}  // namespace se2
}  // namespace loglin
