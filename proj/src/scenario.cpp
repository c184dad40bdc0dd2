#include "loglin/scenario.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "loglin/errors.hpp"

namespace loglin {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ScenarioError("scenario: " + what); }

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(fmt::format("cannot open '{}'", file.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(fmt::format("{} is not valid JSON: {}", origin, e.what()));
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(fmt::format("'{}' must be a number", key));
  return j.get<double>();
}

double positive(const json& j, const std::string& key) {
  const double v = number(j, key);
  if (!(v > 0.0)) fail(fmt::format("'{}' must be positive", key));
  return v;
}

int positive_int(const json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(fmt::format("'{}' must be a positive integer", key));
  return j.get<int>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
    fail(fmt::format("'{}' must be an array of {} numbers", key, N));
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = number(j[static_cast<std::size_t>(i)], key);
  return v;
}

std::vector<Waypoint> parse_waypoints(const json& j) {
  if (!j.is_array()) fail("waypoints must be a JSON array of {x, y, t}");
  std::vector<Waypoint> out;
  for (const json& w : j) {
    if (!w.is_object() || !w.contains("x") || !w.contains("y") || !w.contains("t")) {
      fail("each waypoint needs x, y and t");
    }
    out.push_back({number(w["x"], "x"), number(w["y"], "y"), number(w["t"], "t")});
  }
  if (out.size() < 2) fail("at least two waypoints are required");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i].t > out[i - 1].t)) fail("waypoint times must increase strictly");
  }
  return out;
}

std::vector<Obstacle> parse_obstacles(const json& j) {
  if (!j.is_array()) fail("obstacles must be a JSON array");
  std::vector<Obstacle> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& o = j[i];
    if (!o.is_object()) fail("each obstacle must be an object");
    Obstacle ob;
    ob.name = o.value("name", fmt::format("obstacle_{}", i));
    const std::string type = o.value("type", "rect");
    if (type == "rect") {
      if (!o.contains("min") || !o.contains("max")) fail("rect obstacle needs min and max");
      const Eigen::Vector2d lo = vec<2>(o["min"], "min"), hi = vec<2>(o["max"], "max");
      if (!(hi.x() > lo.x() && hi.y() > lo.y())) fail(fmt::format("obstacle '{}' has empty area", ob.name));
      ob.polygon = ConvexPolygon::Box(lo, hi);
    } else if (type == "polygon") {
      if (!o.contains("vertices") || !o["vertices"].is_array()) fail("polygon obstacle needs vertices");
      std::vector<Eigen::Vector2d> pts;
      for (const json& p : o["vertices"]) pts.push_back(vec<2>(p, "vertices"));
      try {
        ob.polygon = convex_hull(pts);
      } catch (const Degenerate&) {
        fail(fmt::format("obstacle '{}' has empty area", ob.name));
      }
    } else {
      fail(fmt::format("unknown obstacle type '{}'", type));
    }
    out.push_back(std::move(ob));
  }
  return out;
}

// Inline array, or a path resolved against the scenario directory.
json inline_or_file(const json& j, const std::filesystem::path& base_dir, const std::string& key) {
  if (j.is_string()) {
    const std::filesystem::path p = base_dir / j.get<std::string>();
    if (!std::filesystem::exists(p)) fail(fmt::format("{} file '{}' does not exist", key, p.string()));
    return parse_json(read_file(p), p.string());
  }
  return j;
}

}  // namespace

std::vector<Waypoint> load_waypoints(const std::filesystem::path& file) {
  return parse_waypoints(parse_json(read_file(file), file.string()));
}

std::vector<Obstacle> load_obstacles(const std::filesystem::path& file) {
  return parse_obstacles(parse_json(read_file(file), file.string()));
}

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text, "scenario");
  if (!j.is_object()) fail("top level must be an object");
  try {
    Scenario s;
    if (!j.contains("name") || !j["name"].is_string()) fail("'name' (string) is required");
    s.name = j["name"].get<std::string>();
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) fail("'seed' must be a non-negative integer");
      s.seed = j["seed"].get<std::uint64_t>();
    }

    if (!j.contains("waypoints")) fail("'waypoints' is required");
    s.waypoints = parse_waypoints(inline_or_file(j["waypoints"], base_dir, "waypoints"));
    if (j.contains("start_velocity")) s.plan.start_velocity = vec<2>(j["start_velocity"], "start_velocity");
    if (j.contains("end_velocity")) s.plan.end_velocity = vec<2>(j["end_velocity"], "end_velocity");

    if (!j.contains("disturbance") || !j["disturbance"].is_object()) fail("'disturbance' object is required");
    const json& d = j["disturbance"];
    s.disturbance.kind = parse_disturbance_kind(d.value("kind", "sinusoid"));
    if (!d.contains("amplitude")) fail("'disturbance.amplitude' is required");
    s.disturbance.amplitude = vec<3>(d["amplitude"], "disturbance.amplitude");
    if ((s.disturbance.amplitude.array() < 0.0).any()) fail("disturbance amplitudes must be non-negative");
    if (d.contains("frequency")) s.disturbance.frequency = positive(d["frequency"], "disturbance.frequency");
    if (d.contains("phase")) s.disturbance.phase = vec<3>(d["phase"], "disturbance.phase");
    if (d.contains("monte_carlo_frequencies")) {
      s.mc_frequencies.clear();
      for (const json& f : d["monte_carlo_frequencies"]) s.mc_frequencies.push_back(positive(f, "monte_carlo_frequencies"));
      if (s.mc_frequencies.empty()) fail("monte_carlo_frequencies must not be empty");
    }

    if (j.contains("lqr")) {
      const json& l = j["lqr"];
      if (l.contains("Q")) s.q_diag = vec<3>(l["Q"], "lqr.Q");
      if (l.contains("R")) s.r_diag = vec<3>(l["R"], "lqr.R");
      if ((s.q_diag.array() < 0.0).any() || (s.r_diag.array() <= 0.0).any()) {
        fail("lqr weights: Q must be non-negative and R positive");
      }
    }

    if (j.contains("polytope")) {
      const json& p = j["polytope"];
      if (p.contains("vx")) {
        const Eigen::Vector2d v = vec<2>(p["vx"], "polytope.vx");
        s.box.vx_min = v(0);
        s.box.vx_max = v(1);
      }
      if (p.contains("vy")) s.box.vy = number(p["vy"], "polytope.vy");
      if (p.contains("omega")) {
        const Eigen::Vector2d w = vec<2>(p["omega"], "polytope.omega");
        s.box.omega_min = w(0);
        s.box.omega_max = w(1);
      }
      if (!(s.box.vx_max >= s.box.vx_min && s.box.omega_max >= s.box.omega_min)) fail("polytope bounds are inverted");
    }

    if (j.contains("initial_error")) s.initial_error = vec<3>(j["initial_error"], "initial_error");

    if (j.contains("simulation")) {
      const json& sim = j["simulation"];
      if (sim.contains("t_end")) s.t_end = positive(sim["t_end"], "simulation.t_end");
      if (sim.contains("dt")) s.dt = positive(sim["dt"], "simulation.dt");
      if (sim.contains("abort_radius")) s.abort_radius = positive(sim["abort_radius"], "simulation.abort_radius");
      if (s.t_end < s.dt) fail("simulation.t_end must be at least dt");
    }

    if (j.contains("flowpipe")) {
      const json& f = j["flowpipe"];
      if (f.contains("window")) s.window = positive(f["window"], "flowpipe.window");
      if (f.contains("monte_carlo_runs")) s.pipe_runs = positive_int(f["monte_carlo_runs"], "flowpipe.monte_carlo_runs");
      if (f.contains("n_dirs")) s.pipe.n_dirs = positive_int(f["n_dirs"], "flowpipe.n_dirs");
      if (f.contains("sweep_steps")) s.pipe.sweep_steps = positive_int(f["sweep_steps"], "flowpipe.sweep_steps");
      if (f.contains("hull_samples")) s.pipe.hull_samples = positive_int(f["hull_samples"], "flowpipe.hull_samples");
    }
    s.pipe.bounds.v_max = s.box.vx_max;
    s.pipe.bounds.omega_max = std::max(std::abs(s.box.omega_min), std::abs(s.box.omega_max));

    if (j.contains("invariance")) {
      const json& inv = j["invariance"];
      if (inv.contains("monte_carlo_runs")) s.invariance_runs = positive_int(inv["monte_carlo_runs"], "invariance.monte_carlo_runs");
      if (inv.contains("dt")) s.mc_dt = positive(inv["dt"], "invariance.dt");
    }

    if (j.contains("obstacles")) s.obstacles = parse_obstacles(inline_or_file(j["obstacles"], base_dir, "obstacles"));
    return s;
  } catch (const json::exception& e) {
    fail(e.what());
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file) {
  if (!std::filesystem::exists(file)) fail(fmt::format("file '{}' does not exist", file.string()));
  return parse_scenario(read_file(file), file.parent_path());
}

}  // namespace loglin
