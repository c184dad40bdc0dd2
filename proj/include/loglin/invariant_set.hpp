#pragma once

#include <vector>

#include <Eigen/Core>

#include "loglin/error_dynamics.hpp"
#include "loglin/lmi.hpp"
#include "loglin/sim.hpp"

namespace loglin {

/// Over-approximation factor applied to every sampled supremum.
inline constexpr double kSampleMargin = 1.02;
inline constexpr int kBoundarySamples = 2000;

/// n points on the unit sphere, golden-angle spiral (deterministic).
std::vector<Eigen::Vector3d> fibonacci_sphere(int n);

/// Points with zeta^T P zeta = 1: sphere samples mapped through P^-1/2.
std::vector<AlgebraVector> ellipsoid_boundary(const Eigen::Matrix3d& P, int n = kBoundarySamples);

/// Throws AngleWrap when the heading half-width sqrt((P^-1)_thth) reaches
/// pi - kBranchGuard, where the log-coordinate model stops being valid.
void check_angle_guard(const Eigen::Matrix3d& P);

/// 1.02 times the largest singular value of U_l over boundary samples.
double sigma_max_over_ellipsoid(const InvariantEllipsoid& E, int n = kBoundarySamples);

/// 1.02 times the largest |U_l(zeta) u - B K zeta| over boundary samples, the
/// extra input seen by the linear model when the inversion is left out.
double no_inversion_bound(const InvariantEllipsoid& E, const ControlConfig& cfg,
                          int n = kBoundarySamples);

struct IterationRecord {
  double sigma = 0.0;      // bound used for the solve
  double sigma_max = 0.0;  // bound measured on the result
  double beta = 0.0;       // residual bound used (no-inversion only)
  double beta_max = 0.0;
  double rho = 0.0;
};

struct Algorithm1Options {
  double sigma0 = 1.0;
  double eps = 1e-3;
  int max_iter = 50;
  LmiOptions lmi;
};

struct Algorithm1Result {
  InvariantEllipsoid ellipsoid;
  double sigma_final = 0.0;
  double sigma_max = 0.0;
  double beta = 0.0;
  int iterations = 0;
  std::vector<IterationRecord> history;
};

/**
 * @brief Fixed-point iteration on the distortion bound.
 *
 * Solve for the ellipsoid with rho = sigma |wbar|_2, measure sigma_max on it,
 * set sigma = sigma_max, repeat. Exits once |sigma - sigma_max| < eps with
 * sigma >= sigma_max; a near-converged step that would under-approximate is
 * pushed to sigma_max + eps/2 instead. With wbar = 0 rho does not depend on
 * sigma, so a single solve is the fixed point.
 */
Algorithm1Result algorithm1(const PolytopicSystem& sys, const Algorithm1Options& options = {});

/// Same iteration with the no-inversion residual bound beta added to rho; beta
/// is iterated alongside sigma with the same exit rule.
Algorithm1Result no_inversion_ellipsoid(const PolytopicSystem& sys, const ControlConfig& cfg,
                                        const Algorithm1Options& options = {});

/// Per-channel bounds on the control input over the ellipsoid.
struct SaturationBox {
  Eigen::Vector3d bound = Eigen::Vector3d::Zero();
  bool contains(const AlgebraVector& u) const;
};

/// 1.02 times the largest |u_i| over boundary samples for the selected law.
SaturationBox saturation_box(const InvariantEllipsoid& E, const ControlConfig& cfg,
                             ControlMode mode = ControlMode::DynamicInversion,
                             int n = kBoundarySamples);

}  // namespace loglin
