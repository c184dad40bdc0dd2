#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "loglin/geometry.hpp"
#include "loglin/lmi.hpp"
#include "loglin/trajectory.hpp"

namespace loglin {

struct FlowPipeOptions {
  int n_dirs = 256;       // ellipsoid boundary directions for the projection
  int sweep_steps = 32;   // rotations per swept window
  int hull_samples = 100; // reference samples per window
  double dilation = 1.01; // projection dilation about the centroid
  HullBounds bounds;
};

struct FlowPipeSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  ConvexPolygon polygon;
};

struct Obstacle {
  std::string name;
  ConvexPolygon polygon;
};

/// Planar image {trans(exp(zeta)) : zeta^T P zeta <= 1}, over-approximated by
/// n_dirs supporting half-planes whose offsets bound the exact support from
/// above, then dilated about the centroid.
ConvexPolygon project_invariant_set(const InvariantEllipsoid& E, int n_dirs = 256, double dilation = 1.01);

/// Hull of poly rotated through [theta_min, theta_max] in n_steps, plus a disk
/// of radius r dtheta / 2 covering the angles in between. Throws SpanTooLarge
/// for spans of pi or more.
ConvexPolygon sweep_rotation(const ConvexPolygon& poly, double theta_min, double theta_max, int n_steps = 32);

/// One segment per consecutive pair of t_grid: hull box of the reference plus
/// the swept projected invariant set.
std::vector<FlowPipeSegment> build_flow_pipe(const ReferenceTrajectory& traj, const InvariantEllipsoid& E,
                                             const std::vector<double>& t_grid,
                                             const FlowPipeOptions& options = {});

/// Evenly spaced grid from t_begin to t_end with the given window length; the
/// last window absorbs the remainder.
std::vector<double> window_grid(double t_begin, double t_end, double window);

struct Collision {
  std::size_t segment = 0;
  std::size_t obstacle = 0;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct SafetyReport {
  bool safe = true;
  std::vector<Collision> collisions;
};

SafetyReport verify_safety(const std::vector<FlowPipeSegment>& pipe, const std::vector<Obstacle>& obstacles);

}  // namespace loglin
