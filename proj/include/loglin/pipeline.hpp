#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "loglin/flowpipe.hpp"
#include "loglin/invariant_set.hpp"
#include "loglin/riccati.hpp"
#include "loglin/scenario.hpp"
#include "loglin/sim.hpp"
#include "loglin/trajectory.hpp"

namespace loglin {

/// LQR gain designed at the centre of the reference box, with its vertex system.
struct Synthesis {
  ControlConfig control;
  RiccatiSolution riccati;
  PolytopicSystem system;
};

/// Throws NotStabilizable if some vertex of the polytope is not Hurwitz.
Synthesis synthesize(const Scenario& scenario);

/// Min-snap plan through the scenario waypoints, checked against the box.
PlanResult plan_reference(const Scenario& scenario);

/// Reference signal whose lbar comes from the flat outputs of `traj`.
Reference make_reference(const ReferenceTrajectory& traj);

/// Deterministic closed-loop run of the scenario with the given dt and mode.
SimConfig scenario_sim(const Scenario& scenario, const ReferenceTrajectory& traj, const ControlConfig& control,
                       double dt, ControlMode mode);

/// Per-run seed derived from the scenario seed (SplitMix64 of seed + index).
std::uint64_t run_seed(std::uint64_t seed, std::size_t index);

/// Uniform sample inside {zeta^T P zeta <= scale}.
AlgebraVector sample_in_ellipsoid(const Eigen::Matrix3d& P, std::uint64_t seed, double scale = 1.0);

/// Disturbance of random kind, phase and frequency at the declared amplitudes.
Disturbance random_disturbance(const Scenario& scenario, std::uint64_t seed);

/// Monte Carlo run i: random start inside E, random bounded disturbance.
SimConfig monte_carlo_sim(const Scenario& scenario, const ReferenceTrajectory& traj, const ControlConfig& control,
                          const InvariantEllipsoid& E, ControlMode mode, std::size_t index);

/// Runs fn(0..n-1) and returns the results in index order.
template <class Fn>
auto run_indexed(std::size_t n, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

}  // namespace loglin
