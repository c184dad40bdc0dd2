#pragma once

#include <vector>

#include <Eigen/Core>

#include "loglin/error_dynamics.hpp"
#include "loglin/lie.hpp"

namespace loglin {

/// Box of reference inputs lbar = (vx, vy, omega) used to enumerate vertices.
struct ReferenceBox {
  double vx_min = 18.0;
  double vx_max = 20.0;
  double vy = 0.0;
  double omega_min = -1.5707963267948966;
  double omega_max = 1.5707963267948966;

  std::vector<AlgebraVector> corners() const;
  AlgebraVector center() const;
  bool contains(const AlgebraVector& lbar, double tol = 1e-9) const;
};

/// Closed-loop vertex matrices A_i = -ad(lbar_i) + B K and channel bounds wbar.
struct PolytopicSystem {
  std::vector<Eigen::Matrix3d> vertices;
  Eigen::Vector3d w_bound = Eigen::Vector3d::Zero();
};

PolytopicSystem make_polytope(const ReferenceBox& box, const ControlConfig& cfg,
                              const Eigen::Vector3d& w_bound);

/// {zeta : zeta^T P zeta <= 1}
struct InvariantEllipsoid {
  Eigen::Matrix3d P = Eigen::Matrix3d::Identity();
  double alpha = 0.0;  // decay rate certified by the LMI, 1/s
  double sigma = 1.0;  // distortion bound the set was computed for
  double rho = 0.0;    // l2 disturbance radius fed to the LMI
  bool capped = false; // P reached the upper bound p_max I

  Eigen::Vector3d semi_axes() const;  // ascending
  double geometric_mean_semi_axis() const;
  /// Half-width of the set along coordinate i: sqrt((P^-1)_ii).
  double extent(int i) const;
};

struct LmiOptions {
  double p_max = 1e6;  // P <= p_max I keeps the disturbance-free problem bounded
  double alpha_min = 1e-3;
  double alpha_max = 10.0;
  int alpha_scan = 12;     // log-spaced coarse grid before golden section
  int golden_iterations = 24;
  double gap_tolerance = 1e-8;
};

/**
 * @brief Largest-volume invariant ellipsoid for zeta' = A zeta + d, |d| <= rho.
 *
 * For each vertex: [[A^T P + P A + alpha P, rho P], [rho P, -alpha I]] <= 0.
 * log det P is maximized by a log-barrier interior point method on the six
 * entries of P for fixed alpha; alpha is chosen by a coarse log scan refined
 * by golden section. Throws Infeasible if no alpha admits a solution.
 */
InvariantEllipsoid invariant_ellipsoid(const std::vector<Eigen::Matrix3d>& vertices, double rho,
                                       const LmiOptions& options = {});

/// Result of a single fixed-alpha solve; log_det is -inf when infeasible.
struct FixedAlphaSolution {
  bool feasible = false;
  Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
  double log_det = 0.0;
};

FixedAlphaSolution solve_fixed_alpha(const std::vector<Eigen::Matrix3d>& vertices, double rho,
                                     double alpha, const LmiOptions& options = {});

/// Largest eigenvalue over the vertex block matrices; <= 0 means the LMI holds.
double vertex_lmi_residual(const InvariantEllipsoid& E, const std::vector<Eigen::Matrix3d>& vertices);

}  // namespace loglin
