#include "zsm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "zsm/shadow.hpp"

namespace zsm {

Eigen::Vector3d sat_position(double azimuth_deg, double elevation_deg, double range) {
  if (!(elevation_deg > 0.0 && elevation_deg <= 90.0)) throw std::invalid_argument("sat_position: elevation must be in (0, 90]");
  if (!(range > 0.0)) throw std::invalid_argument("sat_position: range must be positive");
  if (!std::isfinite(azimuth_deg)) throw std::invalid_argument("sat_position: non-finite azimuth");
  const double az = azimuth_deg * M_PI / 180.0, el = elevation_deg * M_PI / 180.0;
  return range * Eigen::Vector3d(std::sin(az) * std::cos(el), std::cos(az) * std::cos(el), std::sin(el));
}

Emulation emulate(const Eigen::Vector2d& true_pos, const BuildingSet& buildings, const std::vector<Satellite>& satellites,
                  const GroundModel& ground, const EmulationSpec& spec) {
  if (!(spec.attenuated_cno < spec.threshold && spec.threshold <= spec.base_cno)) {
    throw std::invalid_argument("emulate: need attenuated < threshold <= base");
  }
  for (const auto& b : buildings) {
    if (poly::point_in(b.footprint, true_pos)) throw std::invalid_argument("emulate: receiver inside footprint of " + b.id);
  }
  const OcclusionTester tester(buildings);
  const Eigen::Vector3d from(true_pos.x(), true_pos.y(), ground_height(ground, true_pos));
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> noise(-2.0, 2.0);
  Emulation out;
  for (const auto& s : satellites) {
    const bool nlos = tester.blocked(from, s.position);
    double cno = nlos ? spec.attenuated_cno : spec.base_cno;
    if (spec.jitter) {
      cno += noise(rng);
      // keep the label: NLOS strictly below, LOS at or above
      cno = nlos ? std::min(cno, std::nextafter(spec.threshold, -INFINITY)) : std::max(cno, spec.threshold);
    }
    out.cno.push_back(cno);
    out.labels.push_back(nlos ? Visibility::nlos : Visibility::los);
  }
  return out;
}

}  // namespace zsm
