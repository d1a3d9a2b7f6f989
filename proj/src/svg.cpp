#include "zsm/svg.hpp"

#include <algorithm>
#include <limits>

namespace zsm::svg {

namespace {

void ring_path(std::ostream& out, const Ring& r) {
  for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " L " : "M ") << r[i].x() << ' ' << -r[i].y();
  out << " Z ";
}

}  // namespace

void write(std::ostream& out, const std::vector<Layer>& layers,
           const std::vector<std::pair<Eigen::Vector2d, const char*>>& points) {
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& l : layers) {
    for (const auto& c : l.region->components) {
      for (const auto& p : c.outer) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
  }
  for (const auto& [p, colour] : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  if (!lo.allFinite()) {
    lo.setZero();
    hi.setOnes();
  }
  const double pad = 0.05 * std::max(1.0, (hi - lo).maxCoeff());
  lo.array() -= pad;
  hi.array() += pad;
  const double stroke = 0.004 * (hi - lo).maxCoeff();

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo.x() << ' ' << -hi.y() << ' ' << hi.x() - lo.x()
      << ' ' << hi.y() - lo.y() << "\" width=\"800\" height=\"" << static_cast<int>(800 * (hi.y() - lo.y()) / (hi.x() - lo.x()))
      << "\">\n";
  for (const auto& l : layers) {
    out << "  <path fill-rule=\"evenodd\" style=\"stroke:" << l.stroke << ";stroke-width:" << stroke << ";fill:" << l.fill
        << ";fill-opacity:" << l.fill_opacity << "\" d=\"";
    for (const auto& c : l.region->components) {
      ring_path(out, c.outer);
      for (const auto& h : c.holes) ring_path(out, h);
    }
    out << "\"/>\n";
  }
  for (const auto& [p, colour] : points) {
    out << "  <circle cx=\"" << p.x() << "\" cy=\"" << -p.y() << "\" r=\"" << 2 * stroke << "\" style=\"fill:" << colour
        << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace zsm::svg
