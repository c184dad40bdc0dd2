#include "loglin/export.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include "json.hpp"

#include "loglin/errors.hpp"

namespace loglin {
namespace {

using nlohmann::ordered_json;

// Shortest round-trip representation keeps outputs byte-stable.
std::string num(double v) { return fmt::format("{}", v); }

ordered_json vec_json(const Eigen::Vector3d& v) { return ordered_json::array({v(0), v(1), v(2)}); }

ordered_json pose_json(const SE2& X) {
  return ordered_json::array({X.translation().x(), X.translation().y(), X.angle()});
}

ordered_json polygon_json(const ConvexPolygon& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : p.vertices()) arr.push_back(ordered_json::array({v.x(), v.y()}));
  return arr;
}

}  // namespace

std::string trace_csv(const Trace& trace) {
  std::string out = std::string(kTraceColumns) + "\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& X = trace.X[i];
    const auto& Xb = trace.Xbar[i];
    out += fmt::format("{},{},{},{},{},{},{}", num(trace.t[i]), num(X.translation().x()), num(X.translation().y()),
                       num(X.angle()), num(Xb.translation().x()), num(Xb.translation().y()), num(Xb.angle()));
    for (const auto* v : {&trace.zeta[i], &trace.zeta_model[i], &trace.u[i]}) {
      out += fmt::format(",{},{},{}", num((*v)(0)), num((*v)(1)), num((*v)(2)));
    }
    out += fmt::format(",{},{},{},{}\n", num(trace.w[i](0)), num(trace.w[i](1)), num(trace.w[i](2)),
                       num(trace.deviation[i]));
  }
  return out;
}

std::string trace_json(const Trace& trace) {
  ordered_json j;
  j["t"] = trace.t;
  ordered_json X = ordered_json::array(), Xb = ordered_json::array(), z = ordered_json::array(),
               zm = ordered_json::array(), u = ordered_json::array(), w = ordered_json::array();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    X.push_back(pose_json(trace.X[i]));
    Xb.push_back(pose_json(trace.Xbar[i]));
    z.push_back(vec_json(trace.zeta[i]));
    zm.push_back(vec_json(trace.zeta_model[i]));
    u.push_back(vec_json(trace.u[i]));
    w.push_back(vec_json(trace.w[i]));
  }
  j["X"] = X;
  j["Xbar"] = Xb;
  j["zeta"] = z;
  j["zeta_model"] = zm;
  j["u"] = u;
  j["w"] = w;
  j["deviation"] = trace.deviation;
  j["max_deviation"] = trace.max_deviation();
  return j.dump(1) + "\n";
}

std::string ellipsoid_json(const Algorithm1Result& result, const SaturationBox* box) {
  const InvariantEllipsoid& E = result.ellipsoid;
  ordered_json j;
  ordered_json P = ordered_json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) P.push_back(E.P(r, c));
  }
  j["P"] = P;
  j["alpha"] = E.alpha;
  j["sigma"] = result.sigma_final;
  j["sigma_max"] = result.sigma_max;
  j["beta"] = result.beta;
  j["rho"] = E.rho;
  j["capped"] = E.capped;
  j["iterations"] = result.iterations;
  j["semi_axes"] = vec_json(E.semi_axes());
  j["geometric_mean_semi_axis"] = E.geometric_mean_semi_axis();
  j["extent"] = ordered_json::array({E.extent(0), E.extent(1), E.extent(2)});
  ordered_json hist = ordered_json::array();
  for (const IterationRecord& h : result.history) {
    hist.push_back({{"sigma", h.sigma}, {"sigma_max", h.sigma_max}, {"beta", h.beta},
                    {"beta_max", h.beta_max}, {"rho", h.rho}});
  }
  j["history"] = hist;
  if (box) j["saturation"] = vec_json(box->bound);
  return j.dump(2) + "\n";
}

std::string pipe_json(const std::vector<FlowPipeSegment>& pipe) {
  ordered_json arr = ordered_json::array();
  for (const FlowPipeSegment& s : pipe) {
    arr.push_back({{"t0", s.t0}, {"t1", s.t1}, {"polygon", polygon_json(s.polygon)}});
  }
  ordered_json j;
  j["segments"] = arr;
  return j.dump(1) + "\n";
}

std::string report_json(const SafetyReport& report, const std::vector<Obstacle>& obstacles) {
  ordered_json j;
  j["verdict"] = report.safe ? "SAFE" : "UNSAFE";
  ordered_json arr = ordered_json::array();
  for (const Collision& c : report.collisions) {
    arr.push_back({{"segment", c.segment},
                   {"obstacle", c.obstacle < obstacles.size() ? obstacles[c.obstacle].name : std::to_string(c.obstacle)},
                   {"window", ordered_json::array({c.t0, c.t1})}});
  }
  j["collisions"] = arr;
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const ReferenceTrajectory& traj, double dt) {
  std::string out = "t,x,y,heading,v,omega\n";
  const auto n = static_cast<long long>(std::floor((traj.t_end() - traj.t_begin()) / dt + 1e-9));
  for (long long k = 0; k <= n; ++k) {
    const double t = traj.t_begin() + static_cast<double>(k) * dt;
    const FlatState f = flat_outputs(traj, t);
    out += fmt::format("{},{},{},{},{},{}\n", num(t), num(f.Xbar.translation().x()), num(f.Xbar.translation().y()),
                       num(f.Xbar.angle()), num(f.lbar(0)), num(f.lbar(2)));
  }
  return out;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << text;
}

}  // namespace loglin
