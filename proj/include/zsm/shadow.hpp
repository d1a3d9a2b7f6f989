#ifndef ZSM_SHADOW_HPP
#define ZSM_SHADOW_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zsm/conzono.hpp"
#include "zsm/map_model.hpp"
#include "zsm/polygon2d.hpp"

namespace zsm {

inline constexpr double kDefaultEpsilon = 1e5;

struct ShadowDirection {
  Eigen::Vector3d unit = Eigen::Vector3d::UnitZ();
  std::string satellite_id;
  std::string building_id;
};

struct SatelliteShadow {
  std::string satellite_id;
  MultiPolygon2D region;
};

/// Mean of the concatenated per-part vertex lists.
Eigen::Vector3d building_anchor(const Building& b);

/// Unit vector from the building anchor toward the satellite.
ShadowDirection shadow_direction(const Building& b, const Eigen::Vector3d& sat_pos, std::string satellite_id = {});

/// Segment zonotope centred at the origin spanning +-epsilon along the direction.
ConZono make_direction_zono(const ShadowDirection& d, double epsilon);

/// Throws std::invalid_argument unless epsilon exceeds every building top.
void check_epsilon(const BuildingSet& buildings, double epsilon);

ConZono shadow_volume(const ConZono& part, const ConZono& dir_zono);

/**
 * Shadow of a volume on a horizontal ground piece: the piece is lifted to
 * z = height, intersected with the volume, and the (flat) result projected
 * back to the plane. Throws std::logic_error if the intersection is not flat.
 */
MultiPolygon2D gnss_shadow_piece(const ConZono& vol, const ConZono& aoi_piece, double height);

/// Union over buildings, parts and AOI pieces, clipped to the AOI.
SatelliteShadow satellite_shadow(const BuildingSet& buildings, const Eigen::Vector3d& sat_pos, const GroundModel& ground,
                                 double epsilon = kDefaultEpsilon, std::string satellite_id = {});

/**
 * Segment/building occlusion tests with per-part bounding boxes and
 * cached inverses for parallelepiped parts.
 */
class OcclusionTester {
 public:
  explicit OcclusionTester(const BuildingSet& buildings);

  /// True iff the closed segment from -> to meets any building part.
  bool blocked(const Eigen::Vector3d& from, const Eigen::Vector3d& to) const;

 private:
  struct Part {
    const ConZono* zono;
    Eigen::Vector3d lo, hi;
    bool is_box = false;
    Eigen::Matrix3d inverse;
    Eigen::Vector3d center;
    double slack = 1.0;
  };
  std::vector<Part> parts_;
};

}  // namespace zsm

#endif  // ZSM_SHADOW_HPP
