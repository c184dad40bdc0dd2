#include "loglin/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "loglin/errors.hpp"

namespace loglin {
namespace {

constexpr int kCoeffs = 8;
constexpr int kJoinOrder = 4;  // C4 at interior knots

// k! / (k - r)!
double falling(int k, int r) {
  double f = 1.0;
  for (int i = 0; i < r; ++i) f *= static_cast<double>(k - i);
  return f;
}

// d^r/ds^r of the monomial basis at local time s.
Eigen::Matrix<double, 1, kCoeffs> basis_row(double s, int r) {
  Eigen::Matrix<double, 1, kCoeffs> row = Eigen::Matrix<double, 1, kCoeffs>::Zero();
  for (int k = r; k < kCoeffs; ++k) row(k) = falling(k, r) * std::pow(s, k - r);
  return row;
}

}  // namespace

ReferenceTrajectory::ReferenceTrajectory(std::vector<double> knots, std::vector<Coefficients> coeffs)
    : knots_(std::move(knots)), coeffs_(std::move(coeffs)) {
  if (knots_.size() < 2 || coeffs_.size() + 1 != knots_.size()) {
    throw InvalidArgument("trajectory: need one coefficient block per knot interval");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw InvalidArgument("trajectory: knots must increase strictly");
  }
}

std::size_t ReferenceTrajectory::segment(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) return 0;
  return std::min(static_cast<std::size_t>(it - knots_.begin()) - 1, coeffs_.size() - 1);
}

Eigen::Vector2d ReferenceTrajectory::derivative(double t, int order) const {
  if (order < 0) throw InvalidArgument("derivative order must be non-negative");
  if (order >= kCoeffs) return Eigen::Vector2d::Zero();
  t = std::clamp(t, t_begin(), t_end());
  const std::size_t i = segment(t);
  const double T = knots_[i + 1] - knots_[i];
  const double s = (t - knots_[i]) / T;
  return (basis_row(s, order) * coeffs_[i]).transpose() / std::pow(T, order);
}

double ReferenceTrajectory::snap_cost() const {
  double cost = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Eigen::Matrix<double, 8, 8> H = snap_hessian(knots_[i + 1] - knots_[i]);
    cost += (coeffs_[i].transpose() * H * coeffs_[i]).trace();
  }
  return cost;
}

Eigen::Matrix<double, 8, 8> snap_hessian(double T) {
  Eigen::Matrix<double, 8, 8> H = Eigen::Matrix<double, 8, 8>::Zero();
  for (int k = 4; k < kCoeffs; ++k) {
    for (int l = 4; l < kCoeffs; ++l) {
      H(k, l) = falling(k, 4) * falling(l, 4) / static_cast<double>(k + l - 7);
    }
  }
  // t = T s: each derivative brings 1/T, squared gives 1/T^8, dt = T ds.
  return H / std::pow(T, 7);
}

PlanResult plan_polynomial(const std::vector<Waypoint>& waypoints, const PlanOptions& options) {
  if (waypoints.size() < 2) throw InvalidArgument("plan_polynomial: need at least two waypoints");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (!(waypoints[i].t > waypoints[i - 1].t)) {
      throw InvalidArgument("plan_polynomial: waypoint times must increase strictly");
    }
  }
  const int M = static_cast<int>(waypoints.size()) - 1;
  const int n = kCoeffs * M;
  std::vector<double> T(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    T[static_cast<std::size_t>(i)] = waypoints[static_cast<std::size_t>(i + 1)].t - waypoints[static_cast<std::size_t>(i)].t;
  }

  std::vector<Eigen::VectorXd> rows;
  std::vector<Eigen::RowVector2d> rhs;
  const auto add = [&](std::initializer_list<std::pair<int, Eigen::Matrix<double, 1, kCoeffs>>> terms,
                       const Eigen::RowVector2d& b) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (const auto& [seg, r] : terms) row.segment<kCoeffs>(kCoeffs * seg) += r.transpose();
    rows.push_back(row);
    rhs.push_back(b);
  };

  for (int i = 0; i < M; ++i) {
    const Waypoint& a = waypoints[static_cast<std::size_t>(i)];
    const Waypoint& b = waypoints[static_cast<std::size_t>(i + 1)];
    add({{i, basis_row(0.0, 0)}}, Eigen::RowVector2d(a.x, a.y));
    add({{i, basis_row(1.0, 0)}}, Eigen::RowVector2d(b.x, b.y));
  }
  for (int i = 0; i + 1 < M; ++i) {
    const double Ti = T[static_cast<std::size_t>(i)], Tj = T[static_cast<std::size_t>(i + 1)];
    for (int r = 1; r <= kJoinOrder; ++r) {
      add({{i, basis_row(1.0, r) / std::pow(Ti, r)}, {i + 1, -basis_row(0.0, r) / std::pow(Tj, r)}},
          Eigen::RowVector2d::Zero());
    }
  }
  const auto boundary = [&](int seg, double s, const std::optional<Eigen::Vector2d>& v) {
    const double Ts = T[static_cast<std::size_t>(seg)];
    if (v) add({{seg, basis_row(s, 1) / Ts}}, v->transpose());
    for (int r = 2; r <= 3; ++r) add({{seg, basis_row(s, r) / std::pow(Ts, r)}}, Eigen::RowVector2d::Zero());
  };
  boundary(0, 0.0, options.start_velocity);
  boundary(M - 1, 1.0, options.end_velocity);

  const int m = static_cast<int>(rows.size());
  if (m > n) throw InvalidArgument("plan_polynomial: more constraints than coefficients");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < M; ++i) H.block<kCoeffs, kCoeffs>(kCoeffs * i, kCoeffs * i) = snap_hessian(T[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd A(m, n);
  Eigen::MatrixXd b(m, 2);
  for (int j = 0; j < m; ++j) {
    A.row(j) = rows[static_cast<std::size_t>(j)].transpose();
    b.row(j) = rhs[static_cast<std::size_t>(j)];
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = H;
  kkt.topRightCorner(n, m) = A.transpose();
  kkt.bottomLeftCorner(m, n) = A;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n + m, 2);
  r.bottomRows(m) = b;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kkt);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= options.max_condition)) {
    throw IllConditioned(fmt::format("plan_polynomial: KKT condition number {:.3e} exceeds limit", cond));
  }
  const Eigen::MatrixXd sol = kkt.fullPivLu().solve(r);
  const Eigen::MatrixXd c = sol.topRows(n);
  const Eigen::MatrixXd lambda = sol.bottomRows(m);

  std::vector<double> knots;
  for (const Waypoint& w : waypoints) knots.push_back(w.t);
  std::vector<ReferenceTrajectory::Coefficients> coeffs;
  for (int i = 0; i < M; ++i) coeffs.push_back(c.middleRows<kCoeffs>(kCoeffs * i));

  const double stationarity = (H * c + A.transpose() * lambda).cwiseAbs().maxCoeff();
  return PlanResult{ReferenceTrajectory(std::move(knots), std::move(coeffs)), stationarity, cond};
}

FlatState flat_outputs(const ReferenceTrajectory& traj, double t, double v_min) {
  const Eigen::Vector2d p = traj.position(t);
  const Eigen::Vector2d v = traj.derivative(t, 1);
  const Eigen::Vector2d a = traj.derivative(t, 2);
  const double speed2 = v.squaredNorm();
  if (!(std::sqrt(speed2) > v_min)) {
    throw DegenerateVelocity(fmt::format("flat outputs: speed {:.3g} m/s at t = {:.3f} s", std::sqrt(speed2), t));
  }
  FlatState out;
  out.Xbar = SE2(std::atan2(v.y(), v.x()), p);
  out.lbar = AlgebraVector(std::sqrt(speed2), 0.0, (v.x() * a.y() - v.y() * a.x()) / speed2);
  return out;
}

IntervalHull interval_hull(const ReferenceTrajectory& traj, double t0, double t1, int n_samples,
                           const HullBounds& bounds) {
  if (!(t1 > t0)) throw InvalidArgument("interval_hull: need t0 < t1");
  if (n_samples < 1) throw InvalidArgument("interval_hull: n_samples must be >= 1");
  IntervalHull hull;
  double prev = 0.0;
  for (int k = 0; k <= n_samples; ++k) {
    const double t = t0 + (t1 - t0) * k / n_samples;
    const Eigen::Vector2d p = traj.position(t);
    const Eigen::Vector2d v = traj.derivative(t, 1);
    double heading = std::atan2(v.y(), v.x());
    if (k == 0) {
      hull.lo = hull.hi = p;
      hull.heading_min = hull.heading_max = heading;
    } else {
      heading = prev + std::remainder(heading - prev, 2.0 * std::numbers::pi);
      hull.lo = hull.lo.cwiseMin(p);
      hull.hi = hull.hi.cwiseMax(p);
      hull.heading_min = std::min(hull.heading_min, heading);
      hull.heading_max = std::max(hull.heading_max, heading);
    }
    prev = heading;
  }
  const double dt = (t1 - t0) / n_samples;
  hull.lo.array() -= bounds.v_max * dt;
  hull.hi.array() += bounds.v_max * dt;
  hull.heading_min -= bounds.omega_max * dt;
  hull.heading_max += bounds.omega_max * dt;
  return hull;
}

void validate_reference_inputs(const ReferenceTrajectory& traj, double v_lo, double v_hi,
                               double omega_max, int samples_per_segment) {
  const auto& knots = traj.knots();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    for (int k = 0; k <= samples_per_segment; ++k) {
      const double t = knots[i] + (knots[i + 1] - knots[i]) * k / samples_per_segment;
      const AlgebraVector l = flat_outputs(traj, t).lbar;
      if (l(0) < v_lo || l(0) > v_hi) {
        throw ScenarioError(fmt::format("reference speed {:.3f} m/s at t = {:.3f} s is outside [{}, {}]",
                                        l(0), t, v_lo, v_hi));
      }
      if (std::abs(l(2)) > omega_max) {
        throw ScenarioError(fmt::format("reference turn rate {:.3f} rad/s at t = {:.3f} s exceeds {:.3f}",
                                        l(2), t, omega_max));
      }
    }
  }
}

}  // namespace loglin
