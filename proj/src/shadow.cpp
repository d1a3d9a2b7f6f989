#include "zsm/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "zsm/vertices.hpp"

namespace zsm {

namespace {

constexpr double kFlatTol = 1e-6;
constexpr double kHitTol = 1e-9;

/// Box containing the projection of a part's interval hull along `dir` onto z = height.
bool projected_bbox(const ConZono& part, const Eigen::Vector3d& dir, double height, Eigen::Vector2d& lo,
                    Eigen::Vector2d& hi) {
  if (std::abs(dir.z()) < 1e-6) return false;
  const auto [plo, phi] = part.interval_hull();
  lo.setConstant(std::numeric_limits<double>::infinity());
  hi.setConstant(-std::numeric_limits<double>::infinity());
  for (int s = 0; s < 8; ++s) {
    const Eigen::Vector3d corner(s & 1 ? phi(0) : plo(0), s & 2 ? phi(1) : plo(1), s & 4 ? phi(2) : plo(2));
    const double t = (corner.z() - height) / dir.z();
    const Eigen::Vector2d q = corner.head<2>() - t * dir.head<2>();
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  return true;
}

bool slab_clip(const Eigen::Vector3d& p, const Eigen::Vector3d& d, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  double t0 = 0.0, t1 = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (d(i) == 0.0) {
      if (p(i) < lo(i) || p(i) > hi(i)) return false;
      continue;
    }
    double ta = (lo(i) - p(i)) / d(i), tb = (hi(i) - p(i)) / d(i);
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

Eigen::Vector3d building_anchor(const Building& b) {
  if (b.parts.empty()) throw std::invalid_argument("building_anchor: building without parts");
  return mean_part_vertex(b.parts);
}

ShadowDirection shadow_direction(const Building& b, const Eigen::Vector3d& sat_pos, std::string satellite_id) {
  const Eigen::Vector3d diff = sat_pos - b.anchor;
  const double len = diff.norm();
  if (len == 0.0) throw std::invalid_argument("shadow_direction: satellite coincides with building anchor");
  return {diff / len, std::move(satellite_id), b.id};
}

ConZono make_direction_zono(const ShadowDirection& d, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("direction zonotope: epsilon must be positive");
  return ConZono::zonotope(Eigen::Vector3d::Zero(), epsilon * d.unit);
}

void check_epsilon(const BuildingSet& buildings, double epsilon) {
  if (buildings.empty()) return;
  const double top = max_building_height(buildings);
  if (!(epsilon > top)) {
    std::ostringstream msg;
    msg << "epsilon " << epsilon << " m does not exceed the tallest building (" << top << " m)";
    throw std::invalid_argument(msg.str());
  }
}

ConZono shadow_volume(const ConZono& part, const ConZono& dir_zono) { return minkowski_sum(part, dir_zono); }

MultiPolygon2D gnss_shadow_piece(const ConZono& vol, const ConZono& aoi_piece, double height) {
  if (vol.dim() != 3) throw std::invalid_argument("gnss_shadow_piece: volume must be 3-D");
  if (aoi_piece.dim() != 2) throw std::invalid_argument("gnss_shadow_piece: ground piece must be 2-D");
  Eigen::Matrix<double, 3, 2> lift = Eigen::Matrix<double, 3, 2>::Zero();
  lift(0, 0) = lift(1, 1) = 1.0;
  const ConZono lifted = affine_map(lift, Eigen::Vector3d(0.0, 0.0, height), aoi_piece);
  const ConZono cut = intersect(vol, lifted);
  const VertexList v = vertices(cut, {kPartGeneratorCap, 1e-9});
  if (v.cols() == 0) return {};
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    if (std::abs(v(2, i) - height) > kFlatTol) {
      std::ostringstream msg;
      msg << "gnss_shadow_piece: vertex off the ground plane by " << v(2, i) - height << " m";
      throw std::logic_error(msg.str());
    }
  }
  return poly::from_convex_vertices(v.topRows(2));
}

SatelliteShadow satellite_shadow(const BuildingSet& buildings, const Eigen::Vector3d& sat_pos, const GroundModel& ground,
                                 double epsilon, std::string satellite_id) {
  SatelliteShadow out;
  out.satellite_id = std::move(satellite_id);
  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> piece_boxes;
  for (const auto& p : ground.aoi_pieces) {
    const auto [lo, hi] = p.region.interval_hull();
    piece_boxes.emplace_back(lo, hi);
  }
  std::vector<MultiPolygon2D> pieces;
  for (const auto& b : buildings) {
    const ShadowDirection dir = shadow_direction(b, sat_pos, out.satellite_id);
    const ConZono line = make_direction_zono(dir, epsilon);
    for (const auto& part : b.parts) {
      const ConZono vol = shadow_volume(part, line);
      for (std::size_t k = 0; k < ground.aoi_pieces.size(); ++k) {
        const auto& piece = ground.aoi_pieces[k];
        Eigen::Vector2d lo, hi;
        if (projected_bbox(part, dir.unit, piece.height, lo, hi)) {
          const auto& [plo, phi] = piece_boxes[k];
          if ((hi.array() < plo.array() - 1e-6).any() || (lo.array() > phi.array() + 1e-6).any()) continue;
        }
        auto s = gnss_shadow_piece(vol, piece.region, piece.height);
        if (!s.empty()) pieces.push_back(std::move(s));
      }
    }
  }
  out.region = poly::intersection(poly::unite_all(std::move(pieces)), ground.aoi);
  return out;
}

OcclusionTester::OcclusionTester(const BuildingSet& buildings) {
  for (const auto& b : buildings) {
    for (const auto& p : b.parts) {
      if (p.dim() != 3) throw std::invalid_argument("OcclusionTester: parts must be 3-D");
      Part part;
      part.zono = &p;
      const auto [lo, hi] = p.interval_hull();
      part.lo = lo.array() - kHitTol;
      part.hi = hi.array() + kHitTol;
      if (p.num_constraints() == 0 && p.num_generators() == 3) {
        const Eigen::Matrix3d g = p.generators();
        Eigen::FullPivLU<Eigen::Matrix3d> lu(g);
        if (lu.rcond() > 1e-10) {
          part.is_box = true;
          part.inverse = lu.inverse();
          part.center = p.center();
          part.slack = 1.0 + kHitTol * part.inverse.cwiseAbs().rowwise().sum().maxCoeff();
        }
      }
      parts_.push_back(part);
    }
  }
}

bool OcclusionTester::blocked(const Eigen::Vector3d& from, const Eigen::Vector3d& to) const {
  const Eigen::Vector3d d = to - from;
  for (const auto& part : parts_) {
    if (!slab_clip(from, d, part.lo, part.hi)) continue;
    if (part.is_box) {
      const Eigen::Vector3d s = Eigen::Vector3d::Constant(part.slack);
      if (slab_clip(part.inverse * (from - part.center), part.inverse * d, -s, s)) return true;
    } else if (segment_hits(*part.zono, from, to, kHitTol)) {
      return true;
    }
  }
  return false;
}

}  // namespace zsm
