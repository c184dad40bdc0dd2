#include "loglin/error_dynamics.hpp"

namespace loglin {

SE2 left_error(const SE2& X, const SE2& Xbar) { return X.inverse() * Xbar; }

SE2 right_error(const SE2& X, const SE2& Xbar) { return Xbar * X.inverse(); }

Eigen::Matrix3d group_rhs(const Eigen::Matrix3d& X, const AlgebraVector& l, const AlgebraVector& r) {
  return X * se2::wedge(l) + se2::wedge(r) * X;
}

Eigen::Matrix3d group_rhs(const SE2& X, const AlgebraVector& l, const AlgebraVector& r) {
  return group_rhs(X.matrix(), l, r);
}

AlgebraVector body_velocity(const SE2& X, const AlgebraVector& l, const AlgebraVector& r) {
  return l + se2::adjoint(X.inverse()) * r;
}

AlgebraVector left_log_rhs(const AlgebraVector& z, const AlgebraVector& lbar,
                           const AlgebraVector& ul, const AlgebraVector& ur, const SE2& X) {
  return -se2::ad(lbar) * z + se2::left_distortion(z) * (ul + se2::adjoint(X.inverse()) * ur);
}

AlgebraVector right_log_rhs(const AlgebraVector& z, const AlgebraVector& rbar,
                            const AlgebraVector& ul, const AlgebraVector& ur, const SE2& X) {
  return se2::ad(rbar) * z + se2::right_distortion(z) * (ur + se2::adjoint(X) * ul);
}

AlgebraVector dynamic_inversion_control(const AlgebraVector& z, const ControlConfig& cfg) {
  return se2::left_distortion_inv(z) * (cfg.B * (cfg.K * z));
}

AlgebraVector no_inversion_control(const AlgebraVector& z, const ControlConfig& cfg) {
  return -(cfg.B * (cfg.K * z));
}

AlgebraVector no_inversion_residual(const AlgebraVector& z, const ControlConfig& cfg) {
  const AlgebraVector bkz = cfg.B * (cfg.K * z);
  return -(se2::left_distortion(z) * bkz + bkz);
}

}  // namespace loglin
