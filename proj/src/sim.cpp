#include "loglin/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "loglin/errors.hpp"

namespace loglin {
namespace {

void check_increment(const AlgebraVector& omega) {
  if (std::abs(omega(2)) > std::numbers::pi - se2::kBranchGuard) {
    throw BranchSingularity("integrator: step rotation reaches the branch guard; reduce dt");
  }
}

std::size_t step_count(double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(t_end >= 0.0)) throw InvalidArgument("t_end must be non-negative");
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

// Pose whose heading and translation carry a compensation term, so summing
// 1e4 small increments onto a pose 200 m out does not lose the low bits.
class CompensatedPose {
 public:
  explicit CompensatedPose(const SE2& X) : theta_(X.angle()), p_(X.translation()) {}

  SE2 pose() const { return SE2(theta_ + theta_c_, p_ + p_c_); }

  void advance(const AlgebraVector& omega) {
    const SE2 step = se2::exp(omega);
    const Eigen::Vector2d dp = rotation2d(theta_ + theta_c_) * step.translation();
    add(theta_, theta_c_, step.angle());
    add(p_.x(), p_c_.x(), dp.x());
    add(p_.y(), p_c_.y(), dp.y());
  }

 private:
  // Neumaier's variant of Kahan summation.
  static void add(double& sum, double& c, double v) {
    const double t = sum + v;
    c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }

  double theta_ = 0.0, theta_c_ = 0.0;
  Eigen::Vector2d p_ = Eigen::Vector2d::Zero(), p_c_ = Eigen::Vector2d::Zero();
};

struct LoopState {
  SE2 X;
  SE2 Xbar;
  AlgebraVector zeta;
};

struct LoopRates {
  AlgebraVector x;
  AlgebraVector xbar;
  AlgebraVector zeta;
};

}  // namespace

AlgebraVector dexp_inv_apply(const AlgebraVector& omega, const AlgebraVector& xi) {
  if (omega.isZero(0.0)) return xi;
  return se2::dexp_series(omega).partialPivLu().solve(xi);
}

SE2 rkmk4_step(const SE2& X, double t, double h, const BodyVelocityField& f) {
  const AlgebraVector k1 = f(t, X);
  const AlgebraVector o2 = 0.5 * h * k1;
  check_increment(o2);
  const AlgebraVector k2 = dexp_inv_apply(o2, f(t + 0.5 * h, X * se2::exp(o2)));
  const AlgebraVector o3 = 0.5 * h * k2;
  check_increment(o3);
  const AlgebraVector k3 = dexp_inv_apply(o3, f(t + 0.5 * h, X * se2::exp(o3)));
  const AlgebraVector o4 = h * k3;
  check_increment(o4);
  const AlgebraVector k4 = dexp_inv_apply(o4, f(t + h, X * se2::exp(o4)));
  const AlgebraVector omega = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  check_increment(omega);
  return X * se2::exp(omega);
}

std::vector<SE2> integrate_group(const SE2& X0, const InputField& input, double t_end, double dt) {
  const std::size_t n = step_count(t_end, dt);
  const BodyVelocityField f = [&input](double t, const SE2& X) {
    const MixedInput in = input(t, X);
    return body_velocity(X, in.l, in.r);
  };
  std::vector<SE2> out;
  out.reserve(n + 1);
  out.push_back(X0);
  SE2 X = X0;
  for (std::size_t k = 0; k < n; ++k) {
    X = rkmk4_step(X, static_cast<double>(k) * dt, dt, f);
    out.push_back(X);
  }
  return out;
}

double Trace::max_deviation() const {
  double m = 0.0;
  for (double d : deviation) m = std::max(m, d);
  return m;
}

AlgebraVector feedback(const AlgebraVector& z, const ControlConfig& cfg, ControlMode mode) {
  return mode == ControlMode::DynamicInversion ? dynamic_inversion_control(z, cfg)
                                               : no_inversion_control(z, cfg);
}

Trace simulate_closed_loop(const SimConfig& cfg) {
  const std::size_t n = step_count(cfg.t_end, cfg.dt);
  if (!cfg.reference.lbar) throw InvalidArgument("simulation needs a reference input");
  if (cfg.record_stride < 1) throw InvalidArgument("record_stride must be >= 1");

  const auto disturbance = [&cfg](double t) -> Eigen::Vector3d {
    return cfg.disturbance ? cfg.disturbance(t) : Eigen::Vector3d::Zero();
  };
  const bool exact = cfg.propagation == Propagation::Exact;
  const Eigen::Matrix3d bk = cfg.control.B * cfg.control.K;

  const auto measured = [&cfg](const SE2& X, const SE2& Xbar) {
    const AlgebraVector z = se2::log(left_error(X, Xbar));
    if (z.norm() > cfg.abort_radius) {
      throw Divergence("simulation: log error exceeded the abort radius");
    }
    return z;
  };

  const auto rates = [&](double t, const LoopState& s) {
    const AlgebraVector lbar = cfg.reference.lbar(t);
    const Eigen::Vector3d w = disturbance(t);
    const AlgebraVector u = feedback(measured(s.X, s.Xbar), cfg.control, cfg.mode);
    const Eigen::Matrix3d U = exact ? se2::left_distortion(s.zeta) : Eigen::Matrix3d(-Eigen::Matrix3d::Identity());
    AlgebraVector zdot = (-se2::ad(lbar) + bk) * s.zeta + U * w;
    if (cfg.mode == ControlMode::NoInversion) {
      // U u - BK zeta, with the U -> -I substitution making it vanish.
      zdot += -(U * bk * s.zeta + bk * s.zeta);
    }
    return LoopRates{lbar + u + w, lbar, zdot};
  };

  const auto advance = [](const LoopState& s, const LoopRates& o) {
    check_increment(o.x);
    check_increment(o.xbar);
    return LoopState{s.X * se2::exp(o.x), s.Xbar * se2::exp(o.xbar), s.zeta + o.zeta};
  };
  const auto correct = [](const LoopRates& o, const LoopRates& k) {
    return LoopRates{dexp_inv_apply(o.x, k.x), dexp_inv_apply(o.xbar, k.xbar), k.zeta};
  };
  const auto scale = [](double c, const LoopRates& k) {
    return LoopRates{c * k.x, c * k.xbar, c * k.zeta};
  };

  Trace trace;
  const std::size_t records = n / static_cast<std::size_t>(cfg.record_stride) + 1;
  trace.t.reserve(records);
  trace.X.reserve(records);
  trace.Xbar.reserve(records);
  trace.zeta.reserve(records);
  trace.zeta_model.reserve(records);
  trace.u.reserve(records);
  trace.w.reserve(records);
  trace.deviation.reserve(records);

  LoopState s{cfg.X0, cfg.reference.initial, AlgebraVector::Zero()};
  s.zeta = measured(s.X, s.Xbar);
  CompensatedPose X(s.X), Xbar(s.Xbar);

  const auto record = [&](double t) {
    const AlgebraVector z = measured(s.X, s.Xbar);
    trace.t.push_back(t);
    trace.X.push_back(s.X);
    trace.Xbar.push_back(s.Xbar);
    trace.zeta.push_back(z);
    trace.zeta_model.push_back(s.zeta);
    trace.u.push_back(feedback(z, cfg.control, cfg.mode));
    trace.w.push_back(disturbance(t));
    trace.deviation.push_back((z - s.zeta).norm());
  };

  const double h = cfg.dt;
  const double t0 = cfg.reference.t0;
  record(t0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const LoopRates k1 = rates(t, s);
    const LoopRates o2 = scale(0.5 * h, k1);
    const LoopRates k2 = correct(o2, rates(t + 0.5 * h, advance(s, o2)));
    const LoopRates o3 = scale(0.5 * h, k2);
    const LoopRates k3 = correct(o3, rates(t + 0.5 * h, advance(s, o3)));
    const LoopRates o4 = scale(h, k3);
    const LoopRates k4 = correct(o4, rates(t + h, advance(s, o4)));
    const LoopRates omega{(h / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                          (h / 6.0) * (k1.xbar + 2.0 * k2.xbar + 2.0 * k3.xbar + k4.xbar),
                          (h / 6.0) * (k1.zeta + 2.0 * k2.zeta + 2.0 * k3.zeta + k4.zeta)};
    check_increment(omega.x);
    check_increment(omega.xbar);
    X.advance(omega.x);
    Xbar.advance(omega.xbar);
    s = LoopState{X.pose(), Xbar.pose(), s.zeta + omega.zeta};
    if ((k + 1) % static_cast<std::size_t>(cfg.record_stride) == 0 || k + 1 == n) {
      record(t0 + static_cast<double>(k + 1) * h);
    }
  }
  return trace;
}

ContainmentReport containment_check(const Trace& trace, const Eigen::Matrix3d& P, double tol) {
  ContainmentReport report;
  if (trace.size() == 0) return report;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double level = trace.zeta[i].dot(P * trace.zeta[i]);
    report.max_level = std::max(report.max_level, level);
    if (level <= 1.0 + tol) {
      ++inside;
    } else if (!report.first_violation) {
      report.first_violation = trace.t[i];
    }
  }
  report.fraction_inside = static_cast<double>(inside) / static_cast<double>(trace.size());
  return report;
}

}  // namespace loglin
