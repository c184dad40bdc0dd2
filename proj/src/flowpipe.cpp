#include "loglin/flowpipe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "loglin/errors.hpp"
#include "loglin/invariant_set.hpp"
#include "loglin/lie.hpp"

namespace loglin {

namespace {

// Keeps the part of a convex polygon with d . p <= h.
std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& d, double h) {
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % poly.size()];
    const double fa = d.dot(a) - h, fb = d.dot(b) - h;
    if (fa <= 0.0) out.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) out.push_back(a + (b - a) * (fa / (fa - fb)));
  }
  return out;
}

}  // namespace

// The slice of the set at heading theta is the ellipse
// (u - c)^T M (u - c) <= 1 - s theta^2 with c = -theta M^-1 b, and its image is
// V(theta) u. Writing V = rho(theta) R(theta / 2) gives the support along d as
//   g1 + g3 g2,  g1 = -d^T (sin theta q + (1 - cos theta) J q),
//   g2 = |M^-1/2 V^T d|,  g3 = sqrt(1 - s theta^2),
// with |g1'| <= |q| and |g2'| <= 0.75 |M^-1/2|. Maximizing over a theta grid
// with those slopes bounds the true support from above, so the intersection
// of the resulting half-planes contains the projected set.
ConvexPolygon project_invariant_set(const InvariantEllipsoid& E, int n_dirs, double dilation) {
  check_angle_guard(E.P);
  if (n_dirs < 3) throw InvalidArgument("project_invariant_set: need at least three directions");
  const Eigen::Matrix2d M = E.P.topLeftCorner<2, 2>();
  const Eigen::Vector2d b = E.P.topRightCorner<2, 1>();
  const Eigen::Matrix2d Minv = M.inverse();
  const Eigen::Vector2d q = Minv * b;
  const double s = E.P(2, 2) - b.dot(q);
  const double a = 1.0 / std::sqrt(s);  // heading half-width
  const double lam_min = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(M).eigenvalues().minCoeff();
  const double L1 = q.norm();
  const double L2 = 0.75 / std::sqrt(lam_min);
  Eigen::Matrix2d J;
  J << 0, -1, 1, 0;

  const int m = std::max(64, n_dirs);
  const double step = 2.0 * a / m;
  std::vector<double> th(m + 1), g3(m);
  std::vector<Eigen::Vector2d> w(m + 1);
  std::vector<Eigen::Matrix2d> G(m + 1);
  for (int k = 0; k <= m; ++k) {
    const double t = -a + step * k;
    th[k] = t;
    w[k] = -(std::sin(t) * q + 2.0 * std::pow(std::sin(0.5 * t), 2) * (J * q));
    const double sinc = std::abs(t) < 1e-8 ? 1.0 : std::sin(t) / t;
    const double vers = std::abs(t) < 1e-8 ? 0.5 * t : 2.0 * std::pow(std::sin(0.5 * t), 2) / t;
    const Eigen::Matrix2d V = sinc * Eigen::Matrix2d::Identity() + vers * J;
    G[k] = V * Minv * V.transpose();
  }
  for (int k = 0; k < m; ++k) {
    const double nearest = (th[k] <= 0.0 && th[k + 1] >= 0.0) ? 0.0 : std::min(std::abs(th[k]), std::abs(th[k + 1]));
    g3[k] = std::sqrt(std::max(0.0, 1.0 - s * nearest * nearest));
  }

  std::vector<Eigen::Vector2d> dirs(n_dirs);
  std::vector<double> H(n_dirs, -std::numeric_limits<double>::infinity());
  for (int j = 0; j < n_dirs; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / n_dirs;
    const Eigen::Vector2d d(std::cos(phi), std::sin(phi));
    dirs[j] = d;
    double g1_prev = d.dot(w[0]), g2_prev = std::sqrt(std::max(0.0, d.dot(G[0] * d)));
    for (int k = 0; k < m; ++k) {
      const double g1 = d.dot(w[k + 1]), g2 = std::sqrt(std::max(0.0, d.dot(G[k + 1] * d)));
      const double bound = std::max(g1_prev, g1) + 0.5 * L1 * step + g3[k] * (std::max(g2_prev, g2) + 0.5 * L2 * step);
      H[j] = std::max(H[j], bound);
      g1_prev = g1;
      g2_prev = g2;
    }
  }

  const double reach = 2.0 * *std::max_element(H.begin(), H.end()) + 1e-300;
  std::vector<Eigen::Vector2d> poly = {{-reach, -reach}, {reach, -reach}, {reach, reach}, {-reach, reach}};
  for (int j = 0; j < n_dirs; ++j) poly = clip(poly, dirs[j], H[j]);
  try {
    return convex_hull(poly).scaled_about_centroid(dilation);
  } catch (const Degenerate&) {
    return ConvexPolygon::CircumscribedDisk(Eigen::Vector2d::Zero(), std::max(dilation * reach, 1e-9), 8);
  }
}

ConvexPolygon sweep_rotation(const ConvexPolygon& poly, double theta_min, double theta_max, int n_steps) {
  if (!(theta_min <= theta_max)) throw InvalidArgument("sweep_rotation: theta_min > theta_max");
  if (n_steps < 1) throw InvalidArgument("sweep_rotation: n_steps must be >= 1");
  const double span = theta_max - theta_min;
  if (span >= std::numbers::pi) throw SpanTooLarge("sweep_rotation: heading span of pi or more");
  if (span == 0.0) return poly.rotated(theta_min);

  std::vector<Eigen::Vector2d> pts;
  double r = 0.0;
  for (const auto& p : poly.vertices()) r = std::max(r, p.norm());
  for (int k = 0; k <= n_steps; ++k) {
    const ConvexPolygon rot = poly.rotated(theta_min + span * k / n_steps);
    pts.insert(pts.end(), rot.vertices().begin(), rot.vertices().end());
  }
  // A vertex between two samples stays within r dtheta / 2 of one of them.
  const double pad = r * (span / n_steps) / 2.0;
  const ConvexPolygon hull = convex_hull(std::move(pts));
  if (pad == 0.0) return hull;
  return minkowski_sum(hull, ConvexPolygon::CircumscribedDisk(Eigen::Vector2d::Zero(), pad, 16));
}

std::vector<double> window_grid(double t_begin, double t_end, double window) {
  if (!(window > 0.0)) throw InvalidArgument("window length must be positive");
  if (!(t_end > t_begin)) throw InvalidArgument("window grid needs t_end > t_begin");
  const auto n = std::max<long long>(1, static_cast<long long>(std::floor((t_end - t_begin) / window + 1e-9)));
  std::vector<double> grid;
  for (long long k = 0; k < n; ++k) grid.push_back(t_begin + static_cast<double>(k) * window);
  grid.push_back(t_end);
  return grid;
}

std::vector<FlowPipeSegment> build_flow_pipe(const ReferenceTrajectory& traj, const InvariantEllipsoid& E,
                                             const std::vector<double>& t_grid,
                                             const FlowPipeOptions& options) {
  if (t_grid.size() < 2) throw InvalidArgument("build_flow_pipe: need at least one window");
  const ConvexPolygon projected = project_invariant_set(E, options.n_dirs, options.dilation);
  std::vector<FlowPipeSegment> pipe;
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double t0 = t_grid[i], t1 = t_grid[i + 1];
    const IntervalHull hull = interval_hull(traj, t0, t1, options.hull_samples, options.bounds);
    const ConvexPolygon swept = sweep_rotation(projected, hull.heading_min, hull.heading_max, options.sweep_steps);
    pipe.push_back({t0, t1, minkowski_sum(ConvexPolygon::Box(hull.lo, hull.hi), swept)});
  }
  return pipe;
}

SafetyReport verify_safety(const std::vector<FlowPipeSegment>& pipe, const std::vector<Obstacle>& obstacles) {
  SafetyReport report;
  for (std::size_t s = 0; s < pipe.size(); ++s) {
    for (std::size_t o = 0; o < obstacles.size(); ++o) {
      if (intersects(pipe[s].polygon, obstacles[o].polygon)) {
        report.collisions.push_back({s, o, pipe[s].t0, pipe[s].t1});
      }
    }
  }
  report.safe = report.collisions.empty();
  return report;
}

}  // namespace loglin
