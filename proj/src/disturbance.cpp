#include "loglin/disturbance.hpp"

#include <cmath>
#include <numbers>

#include "loglin/errors.hpp"

namespace loglin {

DisturbanceKind parse_disturbance_kind(const std::string& name) {
  if (name == "sinusoid") return DisturbanceKind::Sinusoid;
  if (name == "square") return DisturbanceKind::Square;
  throw InvalidArgument("unknown disturbance kind '" + name + "'");
}

std::string to_string(DisturbanceKind kind) {
  return kind == DisturbanceKind::Square ? "square" : "sinusoid";
}

Eigen::Vector3d Disturbance::operator()(double t) const {
  Eigen::Vector3d w;
  for (int i = 0; i < 3; ++i) {
    const double s = std::sin(2.0 * std::numbers::pi * frequency * t + phase(i));
    // Square waves are sampled as-is; the value at the zero crossing is +a.
    w(i) = amplitude(i) * (kind == DisturbanceKind::Square ? (s >= 0.0 ? 1.0 : -1.0) : s);
  }
  return w;
}

}  // namespace loglin
