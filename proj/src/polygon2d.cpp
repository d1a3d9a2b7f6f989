#include "zsm/polygon2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/polygon/polygon.hpp>

#include "zsm/hull.hpp"

namespace bg = boost::geometry;
namespace gtl = boost::polygon;

namespace zsm::poly {

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPolygon>;

double snap(double v) { return std::round(v / kSnap) * kSnap; }

template <typename BRing>
void ring_to_bg(const Ring& in, BRing& out) {
  out.clear();
  for (const auto& p : in) out.push_back(BPoint(p.x(), p.y()));
  if (!in.empty()) out.push_back(BPoint(in.front().x(), in.front().y()));
}

BMulti to_bg(const MultiPolygon2D& mp) {
  BMulti out;
  for (const auto& c : mp.components) {
    BPolygon p;
    ring_to_bg(c.outer, p.outer());
    for (const auto& h : c.holes) {
      p.inners().emplace_back();
      ring_to_bg(h, p.inners().back());
    }
    out.push_back(std::move(p));
  }
  bg::correct(out);
  return out;
}

double ring_area(const Ring& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& a = r[i];
    const auto& b = r[(i + 1) % r.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

double ring_perimeter(const Ring& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += (r[(i + 1) % r.size()] - r[i]).norm();
  return s;
}

/// Snapped open ring without consecutive duplicates.
template <typename BRing>
Ring ring_from_bg(const BRing& in) {
  Ring out;
  for (const auto& p : in) {
    Eigen::Vector2d q(snap(p.x()), snap(p.y()));
    if (out.empty() || (q - out.back()).cwiseAbs().maxCoeff() > 0.0) out.push_back(q);
  }
  while (out.size() > 1 && (out.front() - out.back()).cwiseAbs().maxCoeff() == 0.0) out.pop_back();
  return out;
}

bool is_sliver(const Ring& r) {
  if (r.size() < 3) return true;
  const double a = std::abs(ring_area(r));
  if (a < kSliverArea) return true;
  return 2.0 * a / ring_perimeter(r) < 1e-8;
}

MultiPolygon2D from_bg(const BMulti& in) {
  MultiPolygon2D out;
  for (const auto& p : in) {
    Polygon poly;
    poly.outer = ring_from_bg(p.outer());
    if (is_sliver(poly.outer)) continue;
    if (ring_area(poly.outer) < 0.0) std::reverse(poly.outer.begin(), poly.outer.end());
    for (const auto& h : p.inners()) {
      Ring hole = ring_from_bg(h);
      if (is_sliver(hole)) continue;
      if (ring_area(hole) > 0.0) std::reverse(hole.begin(), hole.end());
      poly.holes.push_back(std::move(hole));
    }
    out.components.push_back(std::move(poly));
  }
  return out;
}

/// Round-trip through the snapping/sliver filter.
MultiPolygon2D normalise(const MultiPolygon2D& mp) { return from_bg(to_bg(mp)); }

double segment_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * d - x).norm();
}

bool ring_crossings_odd(const Ring& r, const Eigen::Vector2d& x) {
  bool inside = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const auto& a = r[i];
    const auto& b = r[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

template <typename F>
void for_each_ring(const MultiPolygon2D& mp, F&& f) {
  for (const auto& c : mp.components) {
    f(c.outer);
    for (const auto& h : c.holes) f(h);
  }
}


// Booleans run on Boost.Polygon's integer scanline. Boost.Geometry 1.74 either
// drops pieces that share a collinear edge (no rescaling) or moves vertices by
// up to 1e-3 of the extent (rescaling).
using IPoint = gtl::point_data<int>;
using IPolygon = gtl::polygon_with_holes_data<int>;
using ISet = gtl::polygon_set_data<int>;

/// Largest integer coordinate; keeps scanline cross products inside 64 bits.
constexpr double kIntRange = 536870912.0;  // 2^29

/// Power-of-two scale mapping every coordinate of a and b into the integer range.
double integer_scale(const MultiPolygon2D& a, const MultiPolygon2D& b) {
  double extent = 1.0;
  auto grow = [&](const MultiPolygon2D& mp) {
    for_each_ring(mp, [&](const Ring& r) {
      for (const auto& p : r) extent = std::max(extent, p.cwiseAbs().maxCoeff());
    });
  };
  grow(a);
  grow(b);
  if (!std::isfinite(extent)) throw std::invalid_argument("boolean_op: non-finite coordinate");
  return std::min(std::exp2(std::floor(std::log2(kIntRange / extent))), 1.0 / kSnap);
}

std::vector<IPoint> ring_to_int(const Ring& r, double scale) {
  std::vector<IPoint> out;
  out.reserve(r.size());
  for (const auto& p : r)
    out.emplace_back(static_cast<int>(std::lround(p.x() * scale)), static_cast<int>(std::lround(p.y() * scale)));
  return out;
}

ISet to_int(const MultiPolygon2D& mp, double scale) {
  ISet out;
  for (const auto& c : mp.components) {
    const auto outer = ring_to_int(c.outer, scale);
    std::vector<std::vector<IPoint>> holes;
    for (const auto& h : c.holes) holes.push_back(ring_to_int(h, scale));
    std::vector<gtl::polygon_data<int>> hole_polys(holes.size());
    for (std::size_t i = 0; i < holes.size(); ++i) hole_polys[i].set(holes[i].begin(), holes[i].end());
    IPolygon p;
    p.set(outer.begin(), outer.end());
    p.set_holes(hole_polys.begin(), hole_polys.end());
    out.insert(p);
  }
  return out;
}

template <typename Points>
Ring ring_from_int(const Points& pts, double scale) {
  Ring out;
  for (const auto& p : pts) {
    Eigen::Vector2d q(snap(p.x() / scale), snap(p.y() / scale));
    if (out.empty() || (q - out.back()).cwiseAbs().maxCoeff() > 0.0) out.push_back(q);
  }
  while (out.size() > 1 && (out.front() - out.back()).cwiseAbs().maxCoeff() == 0.0) out.pop_back();
  return out;
}

MultiPolygon2D from_int(const ISet& in, double scale) {
  std::vector<IPolygon> polys;
  in.get(polys);
  MultiPolygon2D out;
  for (const auto& p : polys) {
    Polygon poly;
    poly.outer = ring_from_int(p, scale);
    if (is_sliver(poly.outer)) continue;
    if (ring_area(poly.outer) < 0.0) std::reverse(poly.outer.begin(), poly.outer.end());
    for (auto h = p.begin_holes(); h != p.end_holes(); ++h) {
      Ring hole = ring_from_int(*h, scale);
      if (is_sliver(hole)) continue;
      if (ring_area(hole) > 0.0) std::reverse(hole.begin(), hole.end());
      poly.holes.push_back(std::move(hole));
    }
    out.components.push_back(std::move(poly));
  }
  return out;
}

}  // namespace

MultiPolygon2D from_convex_vertices(const Eigen::MatrixXd& points) {
  if (points.cols() == 0) return {};
  if (points.rows() != 2) throw std::invalid_argument("from_convex_vertices: points must be 2-D");
  const Eigen::Matrix2Xd pts = points;
  const double scale = std::max(1.0, (pts.rowwise().maxCoeff() - pts.rowwise().minCoeff()).norm());
  const auto idx = hull::convex_hull_2d(pts, 1e-12 * scale);
  if (idx.size() < 3) return {};
  Polygon p;
  for (int i : idx) p.outer.push_back(pts.col(i));
  MultiPolygon2D mp;
  mp.components.push_back(std::move(p));
  return normalise(mp);
}

MultiPolygon2D from_ring(const Ring& ring) {
  if (ring.size() < 3) return {};
  MultiPolygon2D mp;
  mp.components.push_back({ring, {}});
  BMulti b = to_bg(mp);
  if (!bg::is_valid(b)) throw std::invalid_argument("from_ring: ring is not simple");
  return from_bg(b);
}

MultiPolygon2D rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  return from_ring({lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}});
}

MultiPolygon2D boolean_op(BoolOp kind, const MultiPolygon2D& a, const MultiPolygon2D& b) {
  switch (kind) {
    case BoolOp::union_:
      if (a.empty()) return b;
      if (b.empty()) return a;
      break;
    case BoolOp::intersection:
      if (a.empty() || b.empty()) return {};
      break;
    case BoolOp::difference:
      if (a.empty()) return {};
      if (b.empty()) return a;
      break;
  }
  using namespace boost::polygon::operators;
  const double scale = integer_scale(a, b);
  const ISet ia = to_int(a, scale), ib = to_int(b, scale);
  ISet out;
  switch (kind) {
    case BoolOp::union_:
      out = ia | ib;
      break;
    case BoolOp::intersection:
      out = ia & ib;
      break;
    case BoolOp::difference:
      out = ia - ib;
      break;
  }
  return from_int(out, scale);
}

MultiPolygon2D unite_all(std::vector<MultiPolygon2D> parts) {
  parts.erase(std::remove_if(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); }), parts.end());
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<MultiPolygon2D> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(unite(parts[i], parts[i + 1]));
    if (parts.size() % 2) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

Measures measures(const MultiPolygon2D& a) {
  Measures m;
  m.component_count = static_cast<int>(a.components.size());
  bool first = true;
  for (const auto& c : a.components) {
    double area = 0.0;
    Eigen::Vector2d moment = Eigen::Vector2d::Zero();
    auto accumulate = [&](const Ring& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto& p = r[i];
        const auto& q = r[(i + 1) % r.size()];
        const double cr = p.x() * q.y() - q.x() * p.y();
        area += 0.5 * cr;
        moment += (p + q) * cr / 6.0;
      }
    };
    accumulate(c.outer);
    for (const auto& h : c.holes) accumulate(h);
    Box2 box{c.outer.front(), c.outer.front()};
    for (const auto& p : c.outer) {
      box.lo = box.lo.cwiseMin(p);
      box.hi = box.hi.cwiseMax(p);
    }
    m.area += area;
    m.component_areas.push_back(area);
    m.centroids.push_back(area > 0.0 ? Eigen::Vector2d(moment / area) : c.outer.front());
    m.component_bboxes.push_back(box);
    if (first) {
      m.bbox = box;
      first = false;
    } else {
      m.bbox.lo = m.bbox.lo.cwiseMin(box.lo);
      m.bbox.hi = m.bbox.hi.cwiseMax(box.hi);
    }
  }
  return m;
}

double area(const MultiPolygon2D& a) { return measures(a).area; }

double boundary_distance(const MultiPolygon2D& a, const Eigen::Vector2d& x) {
  double best = std::numeric_limits<double>::infinity();
  for_each_ring(a, [&](const Ring& r) {
    for (std::size_t i = 0; i < r.size(); ++i) best = std::min(best, segment_distance(x, r[i], r[(i + 1) % r.size()]));
  });
  return best;
}

bool point_in(const MultiPolygon2D& a, const Eigen::Vector2d& x) {
  bool inside = false;
  for_each_ring(a, [&](const Ring& r) {
    if (ring_crossings_odd(r, x)) inside = !inside;
  });
  return inside || boundary_distance(a, x) <= kSnap;
}

double sym_diff_area(const MultiPolygon2D& a, const MultiPolygon2D& b) {
  return area(difference(a, b)) + area(difference(b, a));
}

}  // namespace zsm::poly
