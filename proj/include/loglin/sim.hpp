#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "loglin/error_dynamics.hpp"
#include "loglin/lie.hpp"

namespace loglin {

/// Inputs of the mixed-invariant field X' = X wedge(l) + wedge(r) X.
struct MixedInput {
  AlgebraVector l = AlgebraVector::Zero();
  AlgebraVector r = AlgebraVector::Zero();
};

using InputField = std::function<MixedInput(double t, const SE2& X)>;
using BodyVelocityField = std::function<AlgebraVector(double t, const SE2& X)>;

/// dexp(omega)^-1 xi, by solving against the truncated dexp series.
AlgebraVector dexp_inv_apply(const AlgebraVector& omega, const AlgebraVector& xi);

/// One fourth-order Runge-Kutta-Munthe-Kaas step for X' = X wedge(f(t, X)).
SE2 rkmk4_step(const SE2& X, double t, double h, const BodyVelocityField& f);

/// Poses at t = k dt for k = 0..round(t_end / dt).
std::vector<SE2> integrate_group(const SE2& X0, const InputField& input, double t_end, double dt);

/// Reference pose Xbar driven by Xbar' = Xbar wedge(lbar(t)).
struct Reference {
  SE2 initial;
  double t0 = 0.0;
  std::function<AlgebraVector(double)> lbar;
};

enum class ControlMode { DynamicInversion, NoInversion };

/// Exact keeps U(zeta) in the log-coordinate model; FirstOrder replaces it by -I.
enum class Propagation { Exact, FirstOrder };

struct SimConfig {
  double t_end = 10.0;  // duration, measured from reference.t0
  double dt = 1e-3;
  SE2 X0;
  Reference reference;
  std::function<Eigen::Vector3d(double)> disturbance;
  ControlConfig control;
  ControlMode mode = ControlMode::DynamicInversion;
  Propagation propagation = Propagation::Exact;
  double abort_radius = 10.0;
  int record_stride = 1;
};

/**
 * @brief Sampled closed-loop run.
 *
 * zeta is the log error log(X^-1 Xbar) of the integrated poses; zeta_model is
 * the co-integrated log-linear model; deviation is their distance.
 */
struct Trace {
  std::vector<double> t;
  std::vector<SE2> X;
  std::vector<SE2> Xbar;
  std::vector<AlgebraVector> zeta;
  std::vector<AlgebraVector> zeta_model;
  std::vector<AlgebraVector> u;
  std::vector<Eigen::Vector3d> w;
  std::vector<double> deviation;

  std::size_t size() const { return t.size(); }
  double max_deviation() const;
};

/// Control law selected by `mode`, evaluated on a log error.
AlgebraVector feedback(const AlgebraVector& z, const ControlConfig& cfg, ControlMode mode);

/// Throws Divergence when |zeta| exceeds the abort radius and
/// BranchSingularity when the heading error reaches the log branch guard.
Trace simulate_closed_loop(const SimConfig& cfg);

struct ContainmentReport {
  double fraction_inside = 1.0;
  double max_level = 0.0;  // max zeta^T P zeta
  std::optional<double> first_violation;
};

/// Counts samples with zeta^T P zeta <= 1 + tol, using the pose-derived error.
ContainmentReport containment_check(const Trace& trace, const Eigen::Matrix3d& P, double tol = 1e-9);

}  // namespace loglin
