#include "zsm/fixtures.hpp"

#include <random>
#include <stdexcept>

namespace zsm {

namespace {

Ring square(double half) { return {{-half, -half}, {half, -half}, {half, half}, {-half, half}}; }

const std::vector<BoxSpec>& city_boxes() {
  static const std::vector<BoxSpec> boxes = {
      {-40, -20, -60, -20, 60}, {-40, -20, -18, 0, 45},  {-40, -20, 10, 30, 70}, {-40, -20, 32, 60, 30},
      {20, 40, -60, -20, 50},   {20, 40, -10, 18, 80},   {20, 40, 20, 60, 40},   {48, 60, -30, 0, 20},
      // 9..14
      {-94, -67, 48, 64, 68},   {76, 105, 71, 83, 71},  {-62, -51, 82, 107, 33}, {61, 80, 82, 97, 70},
      {71, 98, 24, 53, 55},     {11, 25, 82, 110, 76},
      // 15..20
      {109, 136, -86, -58, 21}, {-6, 18, 82, 100, 55},  {-87, -73, -143, -114, 26}, {-107, -86, -108, -88, 53},
      {-1, 23, -128, -115, 76}, {-108, -98, -103, -89, 21},
  };
  return boxes;
}

std::vector<std::pair<double, double>> city_sky() {
  return {{10, 62}, {35, 28}, {62, 45}, {88, 33}, {115, 55}, {140, 25}, {165, 70},
          {192, 38}, {218, 50}, {244, 30}, {270, 65}, {296, 42}, {322, 27}, {348, 48}};
}

}  // namespace

std::vector<Satellite> satellites_from_azel(const std::vector<std::pair<double, double>>& azel, double range) {
  std::vector<Satellite> out;
  for (std::size_t i = 0; i < azel.size(); ++i) {
    out.push_back({"G" + std::to_string(i + 1), sat_position(azel[i].first, azel[i].second, range)});
  }
  return out;
}

Fixture make_box_fixture(std::string name, const std::vector<BoxSpec>& boxes, const std::vector<GroundSpec>& aoi,
                         bool exclude_footprints, const std::vector<Satellite>& satellites,
                         const Eigen::Vector2d& truth, const Eigen::Vector2d& street_axis, bool merge) {
  Fixture f;
  f.name = std::move(name);
  f.boxes = boxes;
  std::vector<TriangleMesh> meshes;
  for (const auto& b : boxes) meshes.push_back(box_mesh({b.x0, b.y0, 0.0}, {b.x1, b.y1, b.height}));
  f.mesh = merge_meshes(meshes);
  for (std::size_t i = 0; i < meshes.size(); ++i) f.buildings.push_back(build_building(meshes[i], merge, "b" + std::to_string(i)));
  f.aoi_spec = aoi;
  f.exclude_footprints = exclude_footprints;
  f.scenario.ground = aoi_from(aoi, exclude_footprints, f.buildings);
  f.scenario.satellites = satellites;
  f.scenario.street_axis = street_axis;
  f.scenario.true_position = truth;
  f.scenario.cno = emulate(truth, f.buildings, satellites, f.scenario.ground).cno;
  return f;
}

Fixture two_building_fixture(bool merge) {
  const std::vector<BoxSpec> boxes = {{-40, -10, -100, 100, 60}, {10, 40, -100, 100, 50}};
  const std::vector<GroundSpec> aoi = {{{{-10, -100}, {10, -100}, {10, 100}, {-10, 100}}, 0.0}};
  const auto sats = satellites_from_azel(
      {{0, 60}, {180, 40}, {90, 30}, {270, 50}, {60, 25}, {300, 35}, {10, 70}, {200, 65}, {150, 75}});
  return make_box_fixture("two-building", boxes, aoi, false, sats, {0.0, 0.0}, Eigen::Vector2d::UnitY(), merge);
}

Fixture city_fixture(int building_count) {
  if (building_count < 1 || building_count > static_cast<int>(city_boxes().size())) {
    throw std::invalid_argument("city_fixture: unsupported building count");
  }
  const std::vector<BoxSpec> boxes(city_boxes().begin(), city_boxes().begin() + building_count);
  return make_box_fixture("city-" + std::to_string(building_count), boxes, {{square(60.0), 0.0}}, true,
                          satellites_from_azel(city_sky()), {0.0, -18.0}, Eigen::Vector2d::UnitY());
}

Fixture random_box_scene(std::uint64_t seed, int max_buildings) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, max_buildings);
  std::uniform_real_distribution<double> pos(-70.0, 70.0), size(8.0, 30.0), height(10.0, 80.0);
  std::vector<BoxSpec> boxes;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double cx = pos(rng), cy = pos(rng), sx = size(rng), sy = size(rng);
    boxes.push_back({cx - sx / 2, cx + sx / 2, cy - sy / 2, cy + sy / 2, height(rng)});
  }

  std::uniform_real_distribution<double> inside(-59.0, 59.0);
  Eigen::Vector2d truth;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw std::runtime_error("random_box_scene: no free truth position");
    truth = {inside(rng), inside(rng)};
    bool free = true;
    for (const auto& b : boxes) {
      if (truth.x() >= b.x0 - 0.5 && truth.x() <= b.x1 + 0.5 && truth.y() >= b.y0 - 0.5 && truth.y() <= b.y1 + 0.5) free = false;
    }
    if (free) break;
  }

  std::uniform_int_distribution<int> sats(6, 14);
  std::uniform_real_distribution<double> az(0.0, 360.0), el(15.0, 85.0);
  std::vector<std::pair<double, double>> azel;
  const int k = sats(rng);
  for (int i = 0; i < k; ++i) azel.emplace_back(az(rng), el(rng));

  return make_box_fixture("random-" + std::to_string(seed), boxes, {{square(60.0), 0.0}}, true,
                          satellites_from_azel(azel), truth, Eigen::Vector2d::UnitY());
}

}  // namespace zsm
