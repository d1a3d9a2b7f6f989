#ifndef ZSM_SVG_HPP
#define ZSM_SVG_HPP

#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "zsm/polygon2d.hpp"

namespace zsm::svg {

struct Layer {
  const MultiPolygon2D* region;
  const char* stroke;
  const char* fill;  // "none" for outline only
  double fill_opacity = 0.3;
};

/// Self-contained SVG (inline styles) of the layers, y axis pointing up.
/// `points` are drawn as small dots (candidates, truth).
void write(std::ostream& out, const std::vector<Layer>& layers,
           const std::vector<std::pair<Eigen::Vector2d, const char*>>& points = {});

}  // namespace zsm::svg

#endif  // ZSM_SVG_HPP
