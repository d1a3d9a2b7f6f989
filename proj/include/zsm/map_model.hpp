#ifndef ZSM_MAP_MODEL_HPP
#define ZSM_MAP_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zsm/conzono.hpp"
#include "zsm/mesh.hpp"
#include "zsm/polygon2d.hpp"

namespace zsm {

/// Generator cap used when enumerating building parts.
inline constexpr Eigen::Index kPartGeneratorCap = 256;

struct Building {
  std::string id;
  std::vector<ConZono> parts;  // 3-D
  Eigen::Vector3d anchor = Eigen::Vector3d::Zero();
  MultiPolygon2D footprint;
};

using BuildingSet = std::vector<Building>;

struct GroundPiece {
  ConZono region;  // 2-D
  double height = 0.0;
};

struct GroundModel {
  std::vector<GroundPiece> pieces;
  MultiPolygon2D aoi;
  std::vector<GroundPiece> aoi_pieces;
};

/// Planar polygon at a constant height.
struct GroundSpec {
  Ring polygon;
  double height = 0.0;
};

/// conv{a, b, c} as hull(hull(a, b), c): four generators, two constraints.
ConZono triangle_to_conzono(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                            double min_area = 1e-9);

/// Exact zonotope when the points are the corners of a parallelepiped.
std::optional<ConZono> parallelepiped_from_points(const Eigen::Matrix3Xd& points, double tol = 1e-9);

/**
 * merge = false: one part per triangle.
 * merge = true: one part, the convex hull of the mesh (a zonotope for
 * parallelepipeds, otherwise one generator per hull vertex). Warns when the
 * mesh is not convex, since the hull then over-approximates it.
 */
Building build_building(const TriangleMesh& mesh, bool merge, std::string id);

/// Segments the mesh and builds one building per component (ids b0, b1, ...).
BuildingSet build_buildings(const TriangleMesh& mesh, bool merge);

/// Concatenated vertex lists of the parts (3 x N).
Eigen::Matrix3Xd part_vertices(const std::vector<ConZono>& parts);

Eigen::Vector3d mean_part_vertex(const std::vector<ConZono>& parts);

/// Union of the ground projections of the parts.
MultiPolygon2D footprint(const Building& b);
MultiPolygon2D footprint_of_parts(const std::vector<ConZono>& parts);

MultiPolygon2D all_footprints(const BuildingSet& buildings);

double max_building_height(const BuildingSet& buildings);

/// Ear-clipping triangulation of a simple ring (any orientation).
std::vector<Ring> triangulate(const Ring& ring);

GroundModel make_ground(const std::vector<GroundSpec>& specs);

/**
 * AOI model: each polygon triangulated into pieces at its height. With
 * exclusion, footprints are removed from the aoi region; pieces still cover
 * the full polygons so the aoi stays inside their union.
 */
GroundModel aoi_from(const std::vector<GroundSpec>& specs, bool exclude_footprints, const BuildingSet& buildings);

/// Height of the first AOI (then ground) piece containing x; 0 when none does.
double ground_height(const GroundModel& ground, const Eigen::Vector2d& x);

/// FNV-1a over ids and part data.
std::uint64_t map_hash(const BuildingSet& buildings);

}  // namespace zsm

#endif  // ZSM_MAP_MODEL_HPP
