#include "zsm/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "zsm/hull.hpp"
#include "zsm/log.hpp"
#include "zsm/vertices.hpp"

namespace zsm {

namespace {

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
}

bool in_triangle(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                 const Eigen::Vector2d& c) {
  return cross2(a, b, p) >= 0.0 && cross2(b, c, p) >= 0.0 && cross2(c, a, p) >= 0.0;
}

Eigen::MatrixXd ring_matrix(const Ring& r) {
  Eigen::MatrixXd m(2, static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = r[i];
  return m;
}

void warn_if_nonconvex(const TriangleMesh& mesh, const Eigen::Matrix3Xd& pts, const std::string& id) {
  const double scale = std::max(1.0, (pts.rowwise().maxCoeff() - pts.rowwise().minCoeff()).norm());
  const double tol = 1e-9 * scale;
  hull::Hull3 h;
  try {
    h = hull::convex_hull_3d(pts, tol);
  } catch (const std::domain_error&) {
    return;  // flat meshes are their own hull
  }
  for (const auto& t : mesh.triangles) {
    bool on_facet = false;
    for (const auto& f : h.facets) {
      bool all = true;
      for (int k : t) all = all && std::abs(f.normal.dot(pts.col(k)) - f.offset) <= 1e3 * tol;
      if (all) {
        on_facet = true;
        break;
      }
    }
    if (!on_facet) {
      log::warn("building " + id + " is not convex; merged part over-approximates it");
      return;
    }
  }
}

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ULL;
    }
  }
  void real(double v) { bytes(&v, sizeof v); }
  template <typename Derived>
  void matrix(const Eigen::MatrixBase<Derived>& m) {
    const std::int64_t r = m.rows(), c = m.cols();
    bytes(&r, sizeof r);
    bytes(&c, sizeof c);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) real(m(i, j));
  }
};

}  // namespace

ConZono triangle_to_conzono(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                            double min_area) {
  if (0.5 * (b - a).cross(c - a).norm() < min_area) throw std::invalid_argument("triangle_to_conzono: degenerate triangle");
  const ConZono edge = convex_hull_pair(ConZono::point(a), ConZono::point(b));
  return convex_hull_pair(edge, ConZono::point(c));
}

std::optional<ConZono> parallelepiped_from_points(const Eigen::Matrix3Xd& points, double tol) {
  if (points.cols() != 8) return std::nullopt;
  const double scale = std::max(1.0, (points.rowwise().maxCoeff() - points.rowwise().minCoeff()).norm());
  const double eps = tol * scale;
  const Eigen::Vector3d v0 = points.col(0);
  auto present = [&](const Eigen::Vector3d& q) {
    for (Eigen::Index i = 0; i < 8; ++i) {
      if ((points.col(i) - q).norm() <= eps) return true;
    }
    return false;
  };
  for (int i = 1; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      for (int k = j + 1; k < 8; ++k) {
        Eigen::Matrix3d e;
        e << points.col(i) - v0, points.col(j) - v0, points.col(k) - v0;
        if (std::abs(e.determinant()) <= eps * e.colwise().norm().prod()) continue;
        bool ok = true;
        for (int s = 0; s < 8 && ok; ++s) {
          const Eigen::Vector3d q = v0 + e * Eigen::Vector3d(s & 1, (s >> 1) & 1, (s >> 2) & 1);
          ok = present(q);
        }
        if (ok) return ConZono::zonotope(v0 + e.rowwise().sum() / 2.0, e / 2.0);
      }
    }
  }
  return std::nullopt;
}

Building build_building(const TriangleMesh& mesh, bool merge, std::string id) {
  if (mesh.triangles.empty()) throw std::invalid_argument("build_building: empty mesh");
  Building b;
  b.id = std::move(id);
  if (merge) {
    // Only vertices referenced by triangles count.
    std::vector<bool> used(mesh.vertices.size(), false);
    for (const auto& t : mesh.triangles)
      for (int k : t) used[static_cast<std::size_t>(k)] = true;
    Eigen::Matrix3Xd pts(3, std::count(used.begin(), used.end(), true));
    Eigen::Index col = 0;
    std::vector<int> remap(mesh.vertices.size(), -1);
    for (std::size_t i = 0; i < used.size(); ++i) {
      if (!used[i]) continue;
      remap[i] = static_cast<int>(col);
      pts.col(col++) = mesh.vertices[i];
    }
    const double scale = std::max(1.0, (pts.rowwise().maxCoeff() - pts.rowwise().minCoeff()).norm());
    const auto extreme = hull::extreme_points_3d(pts, 1e-9 * scale);
    Eigen::Matrix3Xd ext(3, static_cast<Eigen::Index>(extreme.size()));
    for (std::size_t i = 0; i < extreme.size(); ++i) ext.col(static_cast<Eigen::Index>(i)) = pts.col(extreme[i]);

    TriangleMesh local = mesh;
    for (auto& t : local.triangles)
      for (int& k : t) k = remap[static_cast<std::size_t>(k)];
    warn_if_nonconvex(local, pts, b.id);

    if (auto box = parallelepiped_from_points(ext)) {
      b.parts.push_back(*box);
    } else {
      b.parts.push_back(hull_of_points(Eigen::MatrixXd(ext)));
    }
  } else {
    for (const auto& t : mesh.triangles) {
      b.parts.push_back(triangle_to_conzono(mesh.vertices[static_cast<std::size_t>(t[0])],
                                            mesh.vertices[static_cast<std::size_t>(t[1])],
                                            mesh.vertices[static_cast<std::size_t>(t[2])]));
    }
  }
  b.anchor = mean_part_vertex(b.parts);
  b.footprint = footprint_of_parts(b.parts);
  return b;
}

BuildingSet build_buildings(const TriangleMesh& mesh, bool merge) {
  BuildingSet out;
  const auto comps = segment_buildings(mesh);
  for (std::size_t i = 0; i < comps.size(); ++i) out.push_back(build_building(comps[i], merge, "b" + std::to_string(i)));
  return out;
}

Eigen::Matrix3Xd part_vertices(const std::vector<ConZono>& parts) {
  std::vector<Eigen::MatrixXd> lists;
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    lists.push_back(vertices(p, {kPartGeneratorCap, 1e-9}));
    total += lists.back().cols();
  }
  Eigen::Matrix3Xd out(3, total);
  Eigen::Index col = 0;
  for (const auto& l : lists) {
    out.middleCols(col, l.cols()) = l;
    col += l.cols();
  }
  return out;
}

Eigen::Vector3d mean_part_vertex(const std::vector<ConZono>& parts) {
  const Eigen::Matrix3Xd v = part_vertices(parts);
  if (v.cols() == 0) throw std::invalid_argument("building has no vertices");
  return v.rowwise().mean();
}

MultiPolygon2D footprint_of_parts(const std::vector<ConZono>& parts) {
  std::vector<MultiPolygon2D> shapes;
  for (const auto& p : parts) {
    const Eigen::MatrixXd v = vertices(p, {kPartGeneratorCap, 1e-9});
    if (v.cols() >= 3) shapes.push_back(poly::from_convex_vertices(v.topRows(2)));
  }
  return poly::unite_all(std::move(shapes));
}

MultiPolygon2D footprint(const Building& b) { return footprint_of_parts(b.parts); }

MultiPolygon2D all_footprints(const BuildingSet& buildings) {
  std::vector<MultiPolygon2D> shapes;
  for (const auto& b : buildings) shapes.push_back(b.footprint);
  return poly::unite_all(std::move(shapes));
}

double max_building_height(const BuildingSet& buildings) {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& b : buildings)
    for (const auto& p : b.parts) h = std::max(h, p.interval_hull().second(2));
  return h;
}

std::vector<Ring> triangulate(const Ring& ring) {
  Ring r = ring;
  if (hull::signed_area(ring_matrix(r)) < 0.0) std::reverse(r.begin(), r.end());
  double scale = 1.0;
  for (const auto& p : r) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale * scale;

  std::vector<Ring> out;
  std::vector<std::size_t> idx(r.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::size_t guard = 0;
  while (idx.size() > 3 && guard++ < 4 * r.size() * r.size()) {
    bool clipped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& a = r[idx[(k + idx.size() - 1) % idx.size()]];
      const auto& b = r[idx[k]];
      const auto& c = r[idx[(k + 1) % idx.size()]];
      const double turn = cross2(a, b, c);
      if (std::abs(turn) <= tol) {
        idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));  // collinear vertex
        clipped = true;
        break;
      }
      if (turn < 0.0) continue;
      bool blocked = false;
      for (std::size_t other : idx) {
        const auto& p = r[other];
        if (&p == &a || &p == &b || &p == &c) continue;
        if (in_triangle(p, a, b, c)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      out.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw std::invalid_argument("triangulate: ring is not simple");
  }
  if (idx.size() == 3 && std::abs(cross2(r[idx[0]], r[idx[1]], r[idx[2]])) > tol) out.push_back({r[idx[0]], r[idx[1]], r[idx[2]]});
  return out;
}

GroundModel make_ground(const std::vector<GroundSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("ground: no polygons");
  GroundModel g;
  std::vector<MultiPolygon2D> regions;
  for (const auto& s : specs) {
    for (const auto& p : s.polygon) {
      if (!p.allFinite()) throw std::invalid_argument("ground: non-finite coordinate");
    }
    MultiPolygon2D region = poly::from_ring(s.polygon);
    if (region.empty()) throw std::invalid_argument("ground: polygon with zero area");
    for (const auto& tri : triangulate(s.polygon)) {
      g.pieces.push_back({hull_of_points(ring_matrix(tri)), s.height});
    }
    regions.push_back(std::move(region));
  }
  g.aoi = poly::unite_all(std::move(regions));
  g.aoi_pieces = g.pieces;
  return g;
}

GroundModel aoi_from(const std::vector<GroundSpec>& specs, bool exclude_footprints, const BuildingSet& buildings) {
  GroundModel g = make_ground(specs);
  if (exclude_footprints) g.aoi = poly::difference(g.aoi, all_footprints(buildings));
  if (g.aoi.empty()) throw std::invalid_argument("aoi: empty after footprint exclusion");
  return g;
}

double ground_height(const GroundModel& ground, const Eigen::Vector2d& x) {
  for (const auto* list : {&ground.aoi_pieces, &ground.pieces}) {
    for (const auto& p : *list) {
      if (contains_point(p.region, x, 1e-9)) return p.height;
    }
  }
  return 0.0;
}

std::uint64_t map_hash(const BuildingSet& buildings) {
  Fnv f;
  for (const auto& b : buildings) {
    f.bytes(b.id.data(), b.id.size());
    for (const auto& p : b.parts) {
      f.matrix(p.center());
      f.matrix(p.generators());
      f.matrix(p.con_matrix());
      f.matrix(p.con_vector());
    }
  }
  return f.h;
}

}  // namespace zsm
