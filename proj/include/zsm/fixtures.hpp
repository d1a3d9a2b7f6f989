#ifndef ZSM_FIXTURES_HPP
#define ZSM_FIXTURES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "zsm/map_model.hpp"
#include "zsm/mesh.hpp"
#include "zsm/scenario.hpp"
#include "zsm/zsm_runner.hpp"

namespace zsm {

/// Box building: footprint [x0, x1] x [y0, y1], from the ground up to `height`.
struct BoxSpec {
  double x0, x1, y0, y1, height;
};

struct Fixture {
  std::string name;
  std::vector<BoxSpec> boxes;
  TriangleMesh mesh;
  BuildingSet buildings;
  std::vector<GroundSpec> aoi_spec;
  bool exclude_footprints = false;
  Scenario scenario;  // C/N0 from ideal emulation at the true position
};

std::vector<Satellite> satellites_from_azel(const std::vector<std::pair<double, double>>& azel,
                                            double range = kDefaultRange);

/// Builds mesh, buildings, AOI and an emulated scenario from box specs.
Fixture make_box_fixture(std::string name, const std::vector<BoxSpec>& boxes, const std::vector<GroundSpec>& aoi,
                         bool exclude_footprints, const std::vector<Satellite>& satellites,
                         const Eigen::Vector2d& truth, const Eigen::Vector2d& street_axis, bool merge = true);

/// Two parallel buildings lining a 20 m wide north-south street, nine satellites (4 NLOS, 5 LOS).
Fixture two_building_fixture(bool merge = true);

/// 120 m x 120 m city block with 8, 14 or 20 buildings and a fixed 14-satellite sky.
Fixture city_fixture(int building_count);

/// Random AOI [-60, 60]^2 scene: 1..max_buildings boxes, 6..14 satellites, truth outside footprints.
Fixture random_box_scene(std::uint64_t seed, int max_buildings = 20);

}  // namespace zsm

#endif  // ZSM_FIXTURES_HPP
