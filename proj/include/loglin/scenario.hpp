#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "loglin/disturbance.hpp"
#include "loglin/flowpipe.hpp"
#include "loglin/lmi.hpp"
#include "loglin/trajectory.hpp"

namespace loglin {

/// Everything a CLI run needs, read from one JSON file. Waypoints and
/// obstacles may be inline arrays or paths relative to the scenario file.
struct Scenario {
  std::string name;
  std::uint64_t seed = 42;

  std::vector<Waypoint> waypoints;
  PlanOptions plan;

  Disturbance disturbance;                         // used by `simulate`
  std::vector<double> mc_frequencies{0.1, 0.5, 1.0, 2.0};  // Hz, Monte Carlo draws

  Eigen::Vector3d q_diag = Eigen::Vector3d::Ones();
  Eigen::Vector3d r_diag = Eigen::Vector3d::Ones();
  ReferenceBox box;

  AlgebraVector initial_error = AlgebraVector::Zero();
  double t_end = 10.0;
  double dt = 1e-3;
  double abort_radius = 10.0;

  double window = 0.5;
  int pipe_runs = 50;
  int invariance_runs = 200;
  double mc_dt = 2e-3;
  FlowPipeOptions pipe;

  std::vector<Obstacle> obstacles;
};

/// Throws ScenarioError on schema violations or missing referenced files.
Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir);

std::vector<Waypoint> load_waypoints(const std::filesystem::path& file);
std::vector<Obstacle> load_obstacles(const std::filesystem::path& file);

}  // namespace loglin
