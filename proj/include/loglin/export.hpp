#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "loglin/flowpipe.hpp"
#include "loglin/invariant_set.hpp"
#include "loglin/sim.hpp"
#include "loglin/trajectory.hpp"

namespace loglin {

/// Column order of trace_csv, also written as its header row.
inline constexpr const char* kTraceColumns =
    "t,x,y,theta,xbar,ybar,thetabar,zeta_x,zeta_y,zeta_theta,model_x,model_y,model_theta,"
    "u_x,u_y,u_theta,w_x,w_y,w_theta,deviation";

std::string trace_csv(const Trace& trace);
std::string trace_json(const Trace& trace);

/// P row-major, alpha, sigma, rho, semi-axes and the iteration history.
std::string ellipsoid_json(const Algorithm1Result& result, const SaturationBox* box = nullptr);

std::string pipe_json(const std::vector<FlowPipeSegment>& pipe);

/// {verdict, collisions: [{segment, obstacle, window}]}
std::string report_json(const SafetyReport& report, const std::vector<Obstacle>& obstacles);

/// Columns t, x, y, heading, v, omega sampled every dt.
std::string trajectory_csv(const ReferenceTrajectory& traj, double dt);

/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace loglin
