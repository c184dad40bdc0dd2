#pragma once

#include <Eigen/Core>

#include "loglin/lie.hpp"

namespace loglin {

/// Linear feedback u = B K zeta on log coordinates.
struct ControlConfig {
  Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
};

/// eta_l = X^-1 Xbar
SE2 left_error(const SE2& X, const SE2& Xbar);
/// eta_r = Xbar X^-1
SE2 right_error(const SE2& X, const SE2& Xbar);

/// Tangent of the mixed-invariant field at X: X wedge(l) + wedge(r) X.
/// Accepts any 3x3 matrix so the group-affine identity can be probed off SE2.
Eigen::Matrix3d group_rhs(const Eigen::Matrix3d& X, const AlgebraVector& l, const AlgebraVector& r);
Eigen::Matrix3d group_rhs(const SE2& X, const AlgebraVector& l, const AlgebraVector& r);

/// Left-trivialized velocity of the same field: l + Ad(X^-1) r.
AlgebraVector body_velocity(const SE2& X, const AlgebraVector& l, const AlgebraVector& r);

/// d/dt zeta_l = -ad(lbar) zeta + U_l(zeta) (ul + Ad(X^-1) ur)
AlgebraVector left_log_rhs(const AlgebraVector& z, const AlgebraVector& lbar,
                           const AlgebraVector& ul, const AlgebraVector& ur, const SE2& X);

/// d/dt zeta_r = ad(rbar) zeta + U_r(zeta) (ur + Ad(X) ul)
AlgebraVector right_log_rhs(const AlgebraVector& z, const AlgebraVector& rbar,
                            const AlgebraVector& ul, const AlgebraVector& ur, const SE2& X);

/// u = U_l^-1(zeta) B K zeta; the closed loop becomes (-ad(lbar) + BK) zeta + U_l w.
AlgebraVector dynamic_inversion_control(const AlgebraVector& z, const ControlConfig& cfg);

/**
 * @brief Feedback without the state-dependent inversion, u = U_l(0)^-1 B K zeta.
 *
 * U_l(0) = -I, so this is -B K zeta: the constant-matrix inversion that makes
 * the linearization at the origin coincide with the dynamic-inversion loop.
 * Applying B K zeta with the opposite sign would drive the linear part to
 * -ad - BK, which is unstable for any stabilizing LQR gain.
 */
AlgebraVector no_inversion_control(const AlgebraVector& z, const ControlConfig& cfg);

/// Residual of the no-inversion loop relative to the linear model:
/// U_l(zeta) u - B K zeta = -(U_l(zeta) + I) B K zeta.
AlgebraVector no_inversion_residual(const AlgebraVector& z, const ControlConfig& cfg);

}  // namespace loglin
