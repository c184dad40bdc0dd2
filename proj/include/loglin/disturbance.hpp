#pragma once

#include <string>

#include <Eigen/Core>

namespace loglin {

enum class DisturbanceKind { Sinusoid, Square };

DisturbanceKind parse_disturbance_kind(const std::string& name);
std::string to_string(DisturbanceKind kind);

/**
 * @brief Bounded wind input w(t), one waveform per algebra channel.
 *
 * Channel i is amplitude(i) * s(2 pi frequency t + phase(i)) with s = sin or
 * the sign of sin. |w_i(t)| <= amplitude(i) for all t.
 */
struct Disturbance {
  DisturbanceKind kind = DisturbanceKind::Sinusoid;
  Eigen::Vector3d amplitude = Eigen::Vector3d::Zero();
  double frequency = 0.5;  // Hz
  Eigen::Vector3d phase = Eigen::Vector3d::Zero();

  Eigen::Vector3d operator()(double t) const;
};

}  // namespace loglin
