#ifndef ZSM_SCENARIO_HPP
#define ZSM_SCENARIO_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "zsm/map_model.hpp"
#include "zsm/zsm_runner.hpp"

namespace zsm {

/// ENU position: range * (sin az cos el, cos az cos el, sin el). Angles in degrees.
Eigen::Vector3d sat_position(double azimuth_deg, double elevation_deg, double range = kDefaultRange);

struct EmulationSpec {
  double base_cno = 45.0;
  double attenuated_cno = 28.0;
  double threshold = kDefaultThreshold;
  std::uint64_t seed = 0;
  /// Uniform +-2 dB-Hz jitter, clamped so no value crosses the threshold.
  bool jitter = false;
};

struct Emulation {
  std::vector<double> cno;
  std::vector<Visibility> labels;
};

/**
 * Ideal-classifier C/N0 values at the true position: NLOS (attenuated) iff
 * the segment from the receiver to the satellite meets a building part.
 * Throws std::invalid_argument when the receiver is inside a footprint.
 */
Emulation emulate(const Eigen::Vector2d& true_pos, const BuildingSet& buildings, const std::vector<Satellite>& satellites,
                  const GroundModel& ground, const EmulationSpec& spec = {});

}  // namespace zsm

#endif  // ZSM_SCENARIO_HPP
