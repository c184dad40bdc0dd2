#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loglin/flowpipe.hpp"
#include "loglin/invariant_set.hpp"
#include "loglin/pipeline.hpp"
#include "loglin/scenario.hpp"
#include "loglin/sim.hpp"

namespace loglin::app {

struct CliOptions {
  std::filesystem::path scenario;
  std::filesystem::path out = "out";
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  bool no_inversion = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnsafe = 2;

/// Scenario with --dt and --seed applied.
Scenario load(const CliOptions& opts);

/// Everything the invariant, flowpipe and verify commands share.
struct Design {
  Scenario scenario;
  PlanResult plan;
  Synthesis synthesis;
  Algorithm1Result inversion;
  std::optional<Algorithm1Result> no_inversion;  // empty when the set wraps in heading
  std::string no_inversion_failure;
};

Design design(const Scenario& scenario, bool need_no_inversion);

/// Ellipsoid used for the pipe: the no-inversion one when requested.
const Algorithm1Result& selected(const Design& d, bool no_inversion);

struct PipeRun {
  std::vector<FlowPipeSegment> pipe;
  std::vector<Trace> traces;  // Monte Carlo runs, started inside the ellipsoid
  std::size_t samples = 0;
  std::size_t outside = 0;    // trace positions not covered by their window's segment
};

PipeRun build_pipe(const Design& d, bool no_inversion, int runs);

/// Counts trace positions outside the segment of their window.
void check_coverage(PipeRun& run);

int cmd_simulate(const CliOptions& opts);
int cmd_invariant(const CliOptions& opts);
int cmd_flowpipe(const CliOptions& opts);
int cmd_verify(const CliOptions& opts);

// Figures.
std::string simulate_svg(const Trace& trace, const std::string& title);
std::string invariant_svg(const InvariantEllipsoid& inversion, const InvariantEllipsoid* no_inversion,
                          const std::string& title);
std::string flowpipe_svg(const ReferenceTrajectory& traj, const std::vector<FlowPipeSegment>& pipe,
                         const std::vector<Obstacle>& obstacles, const std::vector<Trace>& traces,
                         const SafetyReport* report, const std::string& title);

}  // namespace loglin::app
