#ifndef ZSM_HULL_HPP
#define ZSM_HULL_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace zsm::hull {

/// Indices of the strictly convex hull of 2-D points (columns), counterclockwise.
/// Points within `tol` of a hull edge line are not reported. Fewer than three
/// indices means the input is degenerate (a point or a segment).
std::vector<int> convex_hull_2d(const Eigen::Matrix2Xd& points, double tol);

struct Facet {
  std::array<int, 3> corners;  // indices into the input points, counterclockwise seen from outside
  Eigen::Vector3d normal;      // unit outward normal
  double offset = 0.0;         // normal . x <= offset for all hull points
};

struct Hull3 {
  std::vector<int> vertices;  // indices of extreme points
  std::vector<Facet> facets;  // triangulated boundary
};

/// Incremental 3-D hull. Throws std::domain_error when the points do not
/// span three dimensions beyond `tol`.
Hull3 convex_hull_3d(const Eigen::Matrix3Xd& points, double tol);

/// Extreme points of a 3-D point set of any affine dimension, as column indices.
std::vector<int> extreme_points_3d(const Eigen::Matrix3Xd& points, double tol);

/// Shoelace area of a closed ring given by columns (positive when counterclockwise).
double signed_area(const Eigen::Matrix2Xd& ring);

}  // namespace zsm::hull

#endif  // ZSM_HULL_HPP
