#include "zsm/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace zsm::hull {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

struct WorkFacet {
  int a, b, c;
  Eigen::Vector3d normal;
  double offset;
  bool alive = true;
};

WorkFacet make_facet(const Eigen::Matrix3Xd& pts, int a, int b, int c) {
  WorkFacet f{a, b, c, Eigen::Vector3d::Zero(), 0.0};
  Eigen::Vector3d n = (pts.col(b) - pts.col(a)).cross(pts.col(c) - pts.col(a));
  const double len = n.norm();
  if (len > 0.0) n /= len;
  f.normal = n;
  f.offset = n.dot(pts.col(a));
  return f;
}

}  // namespace

double signed_area(const Eigen::Matrix2Xd& ring) {
  const auto k = ring.cols();
  double s = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto j = (i + 1) % k;
    s += ring(0, i) * ring(1, j) - ring(0, j) * ring(1, i);
  }
  return 0.5 * s;
}

std::vector<int> convex_hull_2d(const Eigen::Matrix2Xd& points, double tol) {
  const int n = static_cast<int>(points.cols());
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (points(0, i) != points(0, j)) return points(0, i) < points(0, j);
    return points(1, i) < points(1, j);
  });
  // drop duplicates within tol
  std::vector<int> uniq;
  for (int i : idx) {
    bool dup = false;
    for (auto it = uniq.rbegin(); it != uniq.rend(); ++it) {
      if (points(0, i) - points(0, *it) > tol) break;
      if ((points.col(i) - points.col(*it)).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) uniq.push_back(i);
  }
  if (uniq.size() < 3) return uniq;

  // Monotone chain; a turn counts as convex only when the middle point is
  // farther than tol from the chord.
  auto turns_left = [&](int o, int a, int b) {
    const double cr = cross2(points.col(o), points.col(a), points.col(b));
    const double base = (points.col(b) - points.col(o)).norm();
    return base > 0.0 && cr > tol * base;
  };
  std::vector<int> hull(2 * uniq.size());
  std::size_t k = 0;
  for (int i : uniq) {
    while (k >= 2 && !turns_left(hull[k - 2], hull[k - 1], i)) --k;
    hull[k++] = i;
  }
  for (std::size_t t = uniq.size() - 1, lower = k + 1; t-- > 0;) {
    const int i = uniq[t];
    while (k >= lower && !turns_left(hull[k - 2], hull[k - 1], i)) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

Hull3 convex_hull_3d(const Eigen::Matrix3Xd& pts, double tol) {
  const int n = static_cast<int>(pts.cols());
  if (n < 4) throw std::domain_error("convex_hull_3d: fewer than four points");

  // Initial tetrahedron from extreme points.
  int i0 = 0;
  for (int i = 1; i < n; ++i) {
    if (pts(0, i) < pts(0, i0)) i0 = i;
  }
  int i1 = -1;
  double best = tol;
  for (int i = 0; i < n; ++i) {
    const double d = (pts.col(i) - pts.col(i0)).norm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0) throw std::domain_error("convex_hull_3d: points coincide");
  const Eigen::Vector3d axis = (pts.col(i1) - pts.col(i0)).normalized();
  int i2 = -1;
  best = tol;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d v = pts.col(i) - pts.col(i0);
    const double d = (v - axis * axis.dot(v)).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0) throw std::domain_error("convex_hull_3d: points are collinear");
  const Eigen::Vector3d plane_n = (pts.col(i1) - pts.col(i0)).cross(pts.col(i2) - pts.col(i0)).normalized();
  int i3 = -1;
  best = tol;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(plane_n.dot(pts.col(i) - pts.col(i0)));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0) throw std::domain_error("convex_hull_3d: points are coplanar");

  std::vector<WorkFacet> facets;
  const Eigen::Vector3d inner = (pts.col(i0) + pts.col(i1) + pts.col(i2) + pts.col(i3)) / 4.0;
  auto add_oriented = [&](int a, int b, int c) {
    WorkFacet f = make_facet(pts, a, b, c);
    if (f.normal.dot(inner) > f.offset) f = make_facet(pts, a, c, b);
    facets.push_back(f);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  // Farthest-first insertion keeps near-boundary points from becoming vertices early.
  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  }
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int i : order) dist[static_cast<std::size_t>(i)] = (pts.col(i) - inner).squaredNorm();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[static_cast<std::size_t>(a)] > dist[static_cast<std::size_t>(b)]; });

  std::vector<std::size_t> visible;
  for (int p : order) {
    visible.clear();
    for (std::size_t f = 0; f < facets.size(); ++f) {
      if (facets[f].alive && facets[f].normal.dot(pts.col(p)) - facets[f].offset > tol) visible.push_back(f);
    }
    if (visible.empty()) continue;
    std::set<std::pair<int, int>> edges;
    for (auto f : visible) {
      const auto& fc = facets[f];
      edges.insert({fc.a, fc.b});
      edges.insert({fc.b, fc.c});
      edges.insert({fc.c, fc.a});
    }
    for (auto f : visible) facets[f].alive = false;
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a})) continue;  // interior edge of the visible region
      facets.push_back(make_facet(pts, a, b, p));
    }
  }

  Hull3 out;
  std::vector<std::vector<Eigen::Vector3d>> incident(static_cast<std::size_t>(n));
  for (const auto& f : facets) {
    if (!f.alive) continue;
    out.facets.push_back({{f.a, f.b, f.c}, f.normal, f.offset});
    for (int v : {f.a, f.b, f.c}) incident[static_cast<std::size_t>(v)].push_back(f.normal);
  }
  // A hull point is a vertex only if its incident facet normals span 3-D;
  // otherwise it sits inside a flat facet or along an edge.
  for (int v = 0; v < n; ++v) {
    const auto& normals = incident[static_cast<std::size_t>(v)];
    if (normals.empty()) continue;
    Eigen::MatrixXd stack(static_cast<Eigen::Index>(normals.size()), 3);
    for (std::size_t r = 0; r < normals.size(); ++r) stack.row(static_cast<Eigen::Index>(r)) = normals[r].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
    if (svd.singularValues().size() == 3 && svd.singularValues()(2) > 1e-7) out.vertices.push_back(v);
  }
  return out;
}

std::vector<int> extreme_points_3d(const Eigen::Matrix3Xd& points, double tol) {
  const auto n = points.cols();
  if (n == 0) return {};
  const Eigen::Vector3d mean = points.rowwise().mean();
  const Eigen::Matrix3Xd centered = points.colwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  // Widths along principal axes decide the affine dimension.
  int dim = 0;
  for (int k = 0; k < 3; ++k) {
    const Eigen::RowVectorXd proj = svd.matrixU().col(k).transpose() * centered;
    if (proj.maxCoeff() - proj.minCoeff() > tol) dim = k + 1;
  }
  if (dim == 0) return {0};
  if (dim == 3) return convex_hull_3d(points, tol).vertices;
  if (dim == 1) {
    const Eigen::RowVectorXd proj = svd.matrixU().col(0).transpose() * centered;
    Eigen::Index lo, hi;
    proj.minCoeff(&lo);
    proj.maxCoeff(&hi);
    return {static_cast<int>(lo), static_cast<int>(hi)};
  }
  const Eigen::Matrix2Xd flat = svd.matrixU().leftCols(2).transpose() * centered;
  return convex_hull_2d(flat, tol);
}

}  // namespace zsm::hull
