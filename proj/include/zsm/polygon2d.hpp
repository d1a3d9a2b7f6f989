#ifndef ZSM_POLYGON2D_HPP
#define ZSM_POLYGON2D_HPP

#include <vector>

#include <Eigen/Dense>

namespace zsm {

/// Open ring (no repeated closing point).
using Ring = std::vector<Eigen::Vector2d>;

/// Outer ring counterclockwise, holes clockwise.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

/// Planar region made of interior-disjoint polygons. No components is the empty set.
struct MultiPolygon2D {
  std::vector<Polygon> components;

  bool empty() const { return components.empty(); }
};

struct Box2 {
  Eigen::Vector2d lo = Eigen::Vector2d::Zero();
  Eigen::Vector2d hi = Eigen::Vector2d::Zero();

  Eigen::Vector2d widths() const { return hi - lo; }
};

struct Measures {
  double area = 0.0;
  std::vector<double> component_areas;
  std::vector<Eigen::Vector2d> centroids;
  std::vector<Box2> component_bboxes;
  Box2 bbox;  // all zero when empty
  int component_count = 0;
};

enum class BoolOp { union_, intersection, difference };

namespace poly {

/// Coordinates are rounded to this grid after every construction and boolean operation.
inline constexpr double kSnap = 1e-9;
/// Pieces below this area (m^2) are dropped.
inline constexpr double kSliverArea = 1e-12;

/// Convex hull of 2-D points (columns). Fewer than three hull points or zero area gives the empty region.
MultiPolygon2D from_convex_vertices(const Eigen::MatrixXd& points);

/// Region bounded by a simple ring in any orientation.
MultiPolygon2D from_ring(const Ring& ring);

MultiPolygon2D rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);

/// Exact on an integer grid whose step is the power of two just above max|coord| / 2^29 (never finer than kSnap).
MultiPolygon2D boolean_op(BoolOp kind, const MultiPolygon2D& a, const MultiPolygon2D& b);

inline MultiPolygon2D unite(const MultiPolygon2D& a, const MultiPolygon2D& b) { return boolean_op(BoolOp::union_, a, b); }
inline MultiPolygon2D intersection(const MultiPolygon2D& a, const MultiPolygon2D& b) {
  return boolean_op(BoolOp::intersection, a, b);
}
inline MultiPolygon2D difference(const MultiPolygon2D& a, const MultiPolygon2D& b) {
  return boolean_op(BoolOp::difference, a, b);
}

/// Union of many regions (pairwise tree reduction).
MultiPolygon2D unite_all(std::vector<MultiPolygon2D> parts);

Measures measures(const MultiPolygon2D& a);
double area(const MultiPolygon2D& a);

/// Even-odd membership; points within kSnap of the boundary count as inside.
bool point_in(const MultiPolygon2D& a, const Eigen::Vector2d& x);

/// Distance from x to the nearest boundary edge (infinity when empty).
double boundary_distance(const MultiPolygon2D& a, const Eigen::Vector2d& x);

double sym_diff_area(const MultiPolygon2D& a, const MultiPolygon2D& b);

}  // namespace poly
}  // namespace zsm

#endif  // ZSM_POLYGON2D_HPP
