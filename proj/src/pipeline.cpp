#include "loglin/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "loglin/errors.hpp"

namespace loglin {

Synthesis synthesize(const Scenario& scenario) {
  Synthesis out;
  const Eigen::Matrix3d A = -se2::ad(scenario.box.center());
  const Eigen::Matrix3d B = Eigen::Matrix3d::Identity();
  out.riccati = care_solve(A, B, scenario.q_diag.asDiagonal().toDenseMatrix(),
                           scenario.r_diag.asDiagonal().toDenseMatrix());
  out.control.B = B;
  out.control.K = out.riccati.K;
  out.system = make_polytope(scenario.box, out.control, scenario.disturbance.amplitude);
  for (std::size_t i = 0; i < out.system.vertices.size(); ++i) {
    const double a = spectral_abscissa(out.system.vertices[i]);
    if (a >= 0.0) {
      throw NotStabilizable(fmt::format("LQR gain leaves polytope vertex {} unstable (max Re = {:.3g})", i, a));
    }
  }
  return out;
}

PlanResult plan_reference(const Scenario& scenario) {
  PlanResult plan = plan_polynomial(scenario.waypoints, scenario.plan);
  const double omega_max = std::max(std::abs(scenario.box.omega_min), std::abs(scenario.box.omega_max));
  validate_reference_inputs(plan.trajectory, scenario.box.vx_min, scenario.box.vx_max, omega_max);
  return plan;
}

Reference make_reference(const ReferenceTrajectory& traj) {
  Reference ref;
  ref.t0 = traj.t_begin();
  ref.initial = flat_outputs(traj, ref.t0).Xbar;
  ref.lbar = [traj](double t) { return flat_outputs(traj, t).lbar; };
  return ref;
}

SimConfig scenario_sim(const Scenario& scenario, const ReferenceTrajectory& traj, const ControlConfig& control,
                       double dt, ControlMode mode) {
  SimConfig cfg;
  cfg.reference = make_reference(traj);
  cfg.t_end = std::min(scenario.t_end, traj.t_end() - traj.t_begin());
  cfg.dt = dt;
  cfg.X0 = cfg.reference.initial * se2::exp(-scenario.initial_error);
  cfg.disturbance = scenario.disturbance;
  cfg.control = control;
  cfg.mode = mode;
  cfg.abort_radius = scenario.abort_radius;
  return cfg;
}

std::uint64_t run_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AlgebraVector sample_in_ellipsoid(const Eigen::Matrix3d& P, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  Eigen::Vector3d d(normal(rng), normal(rng), normal(rng));
  if (d.norm() == 0.0) d = Eigen::Vector3d::UnitX();
  const double r = std::cbrt(uniform(rng)) * std::sqrt(scale);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P);
  const Eigen::Matrix3d root_inv = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().transpose();
  return root_inv * (r * d.normalized());
}

Disturbance random_disturbance(const Scenario& scenario, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<std::size_t> pick(0, scenario.mc_frequencies.size() - 1);
  std::bernoulli_distribution square(0.5);
  Disturbance d;
  d.kind = square(rng) ? DisturbanceKind::Square : DisturbanceKind::Sinusoid;
  d.amplitude = scenario.disturbance.amplitude;
  d.frequency = scenario.mc_frequencies[pick(rng)];
  d.phase = Eigen::Vector3d(phase(rng), phase(rng), phase(rng));
  return d;
}

SimConfig monte_carlo_sim(const Scenario& scenario, const ReferenceTrajectory& traj, const ControlConfig& control,
                          const InvariantEllipsoid& E, ControlMode mode, std::size_t index) {
  const std::uint64_t seed = run_seed(scenario.seed, index);
  SimConfig cfg = scenario_sim(scenario, traj, control, scenario.mc_dt, mode);
  cfg.X0 = cfg.reference.initial * se2::exp(-sample_in_ellipsoid(E.P, seed));
  cfg.disturbance = random_disturbance(scenario, seed);
  return cfg;
}

}  // namespace loglin
