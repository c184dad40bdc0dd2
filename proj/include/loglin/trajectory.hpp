#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "loglin/lie.hpp"

namespace loglin {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

struct PlanOptions {
  /// Fixed boundary velocities; a free end is left to the optimizer.
  /// Acceleration and jerk are zero at both ends either way.
  std::optional<Eigen::Vector2d> start_velocity;
  std::optional<Eigen::Vector2d> end_velocity;
  double max_condition = 1e12;
};

/// Piecewise degree-7 polynomial in the plane. Segment i is evaluated in local
/// time s = (t - t_i) / T_i in [0, 1]; column 0 of its coefficients is x, 1 is y.
class ReferenceTrajectory {
 public:
  using Coefficients = Eigen::Matrix<double, 8, 2>;

  ReferenceTrajectory(std::vector<double> knots, std::vector<Coefficients> coeffs);

  double t_begin() const { return knots_.front(); }
  double t_end() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Coefficients>& coefficients() const { return coeffs_; }

  /// Derivative of the given order (0 = position) at t, clamped to the knot range.
  Eigen::Vector2d derivative(double t, int order) const;
  Eigen::Vector2d position(double t) const { return derivative(t, 0); }

  /// Integral of |p''''|^2 over the whole trajectory.
  double snap_cost() const;

 private:
  std::size_t segment(double t) const;

  std::vector<double> knots_;
  std::vector<Coefficients> coeffs_;
};

/// Per-segment snap cost Hessian in local time for a segment of duration T.
Eigen::Matrix<double, 8, 8> snap_hessian(double T);

struct PlanResult {
  ReferenceTrajectory trajectory;
  double stationarity_residual = 0.0;  // |H c + A^T lambda|_inf
  double condition = 0.0;              // KKT condition number
};

/// Minimum-snap plan through the waypoints with C4 joins, as one KKT solve.
/// Throws IllConditioned when the KKT matrix condition exceeds the option.
PlanResult plan_polynomial(const std::vector<Waypoint>& waypoints, const PlanOptions& options = {});

struct FlatState {
  SE2 Xbar;
  AlgebraVector lbar;
};

inline constexpr double kMinSpeed = 0.1;

/// Heading from the velocity direction; lbar = (|v|, 0, curvature rate).
/// Throws DegenerateVelocity when |v| <= v_min.
FlatState flat_outputs(const ReferenceTrajectory& traj, double t, double v_min = kMinSpeed);

struct IntervalHull {
  Eigen::Vector2d lo = Eigen::Vector2d::Zero();
  Eigen::Vector2d hi = Eigen::Vector2d::Zero();
  double heading_min = 0.0;  // unwrapped
  double heading_max = 0.0;
};

struct HullBounds {
  double v_max = 20.0;          // m/s, speed bound used to cover inter-sample motion
  double omega_max = 1.5707963267948966;  // rad/s, same for heading
};

/// Box over n_samples + 1 evenly spaced samples of [t0, t1], inflated by
/// v_max (t1 - t0) / n_samples; heading range likewise with omega_max.
IntervalHull interval_hull(const ReferenceTrajectory& traj, double t0, double t1, int n_samples,
                           const HullBounds& bounds = {});

/// Samples lbar over the trajectory; throws ScenarioError when speed leaves
/// [v_lo, v_hi] or |omega| exceeds omega_max.
void validate_reference_inputs(const ReferenceTrajectory& traj, double v_lo, double v_hi,
                               double omega_max, int samples_per_segment = 200);

}  // namespace loglin
