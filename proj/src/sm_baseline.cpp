#include "zsm/sm_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "zsm/log.hpp"
#include "zsm/shadow.hpp"

namespace zsm {

CandidateGrid make_grid(const GroundModel& ground, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("make_grid: spacing must be positive");
  if (ground.aoi.empty()) throw std::invalid_argument("make_grid: empty AOI");
  const Measures m = poly::measures(ground.aoi);
  const Eigen::Vector2d extent = m.bbox.widths();
  CandidateGrid g;
  g.spacing = spacing;
  g.nx = static_cast<int>(std::floor(extent.x() / spacing + 1e-9));
  g.ny = static_cast<int>(std::floor(extent.y() / spacing + 1e-9));
  const Eigen::Vector2d mid = (m.bbox.lo + m.bbox.hi) / 2.0;
  g.origin = mid - spacing * Eigen::Vector2d(g.nx - 1, g.ny - 1) / 2.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Eigen::Vector2d p = g.origin + spacing * Eigen::Vector2d(i, j);
      if (poly::point_in(ground.aoi, p)) g.candidates.push_back(p);
    }
  }
  if (g.candidates.empty()) throw std::invalid_argument("make_grid: no candidates (spacing too large for the AOI)");
  return g;
}

VisibilityMatrix predict_visibility(const CandidateGrid& grid, const BuildingSet& buildings,
                                    const std::vector<Satellite>& satellites, const GroundModel& ground, int threads) {
  const auto n = static_cast<Eigen::Index>(grid.candidates.size());
  const auto s = static_cast<Eigen::Index>(satellites.size());
  VisibilityMatrix vis(n, s);
  const OcclusionTester tester(buildings);
  auto rows = [&](Eigen::Index begin, Eigen::Index step) {
    for (Eigen::Index i = begin; i < n; i += step) {
      const auto& c = grid.candidates[static_cast<std::size_t>(i)];
      const Eigen::Vector3d from(c.x(), c.y(), ground_height(ground, c));
      for (Eigen::Index j = 0; j < s; ++j) vis(i, j) = !tester.blocked(from, satellites[static_cast<std::size_t>(j)].position);
    }
  };
  const int t = std::max(1, threads);
  if (t == 1) {
    rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(rows, k, t);
    for (auto& th : pool) th.join();
  }
  return vis;
}

SmReport score_and_select(const VisibilityMatrix& predicted, const std::vector<Visibility>& measured,
                          const std::vector<Eigen::Vector2d>& candidates, const Eigen::Vector2d& street_axis) {
  if (predicted.cols() != static_cast<Eigen::Index>(measured.size())) {
    throw std::invalid_argument("score_and_select: measurement count does not match the visibility map");
  }
  if (predicted.rows() != static_cast<Eigen::Index>(candidates.size())) {
    throw std::invalid_argument("score_and_select: candidate count does not match the visibility map");
  }
  if (candidates.empty()) throw std::invalid_argument("score_and_select: no candidates");

  SmReport r;
  const auto n = predicted.rows();
  r.scores.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    int score = 0;
    for (Eigen::Index j = 0; j < predicted.cols(); ++j) {
      score += predicted(i, j) == (measured[static_cast<std::size_t>(j)] == Visibility::los);
    }
    r.scores[static_cast<std::size_t>(i)] = score;
  }
  const int top = *std::max_element(r.scores.begin(), r.scores.end());
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    if (r.scores[i] == top) r.best.push_back(i);
  }

  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = r.scores[static_cast<std::size_t>(i)];
  if (w.sum() <= 0.0) {
    log::warn("all visibility scores are zero; using uniform weights");
    r.uniform_fallback = true;
    w.setOnes();
  }
  w /= w.sum();
  for (Eigen::Index i = 0; i < n; ++i) r.weighted_mean += w(i) * candidates[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d d = candidates[static_cast<std::size_t>(i)] - r.weighted_mean;
    r.weighted_cov += w(i) * d * d.transpose();
  }
  Eigen::Matrix2d rot;
  rot.row(0) = Eigen::Vector2d(-street_axis.y(), street_axis.x()).transpose();
  rot.row(1) = street_axis.transpose();
  const Eigen::Matrix2d cov_street = rot * r.weighted_cov * rot.transpose();
  r.bounds = 6.0 * cov_street.diagonal().cwiseMax(0.0).cwiseSqrt();
  return r;
}

std::uint64_t visibility_key(std::uint64_t map_hash, const CandidateGrid& grid, const std::vector<Satellite>& satellites) {
  std::uint64_t h = 1469598103934665603ULL ^ map_hash;
  auto mix = [&](double v) {
    unsigned char bytes[sizeof v];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  mix(grid.origin.x());
  mix(grid.origin.y());
  mix(grid.spacing);
  mix(static_cast<double>(grid.candidates.size()));
  for (const auto& s : satellites) {
    mix(s.position.x());
    mix(s.position.y());
    mix(s.position.z());
  }
  return h;
}

}  // namespace zsm
