#ifndef ZSM_SM_BASELINE_HPP
#define ZSM_SM_BASELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zsm/map_model.hpp"
#include "zsm/zsm_runner.hpp"

namespace zsm {

struct CandidateGrid {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();  // first lattice point (lower-left)
  double spacing = 1.0;
  int nx = 0, ny = 0;                                // lattice size before clipping
  std::vector<Eigen::Vector2d> candidates;
};

/// Rows: candidates, columns: satellites; true = LOS predicted.
using VisibilityMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SmReport {
  std::vector<int> scores;
  std::vector<std::size_t> best;  // indices of all maximal-score candidates
  Eigen::Vector2d weighted_mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d weighted_cov = Eigen::Matrix2d::Zero();
  Eigen::Vector2d bounds = Eigen::Vector2d::Zero();  // (cross, along) = 6 sigma per axis
  bool uniform_fallback = false;
  double offline_seconds = 0.0;
  double online_seconds = 0.0;
};

/**
 * Square lattice centred in the AOI bounding box with floor(extent / spacing)
 * points per axis, kept where the point lies in the AOI (boundary included).
 * Throws std::invalid_argument for spacing <= 0 or when nothing survives.
 */
CandidateGrid make_grid(const GroundModel& ground, double spacing);

/// LOS predicted iff the segment from the candidate (at ground height) to the satellite meets no part.
VisibilityMatrix predict_visibility(const CandidateGrid& grid, const BuildingSet& buildings,
                                    const std::vector<Satellite>& satellites, const GroundModel& ground,
                                    int threads = 1);

SmReport score_and_select(const VisibilityMatrix& predicted, const std::vector<Visibility>& measured,
                          const std::vector<Eigen::Vector2d>& candidates, const Eigen::Vector2d& street_axis);

/// Cache key for a visibility map: map hash, grid and satellite positions.
std::uint64_t visibility_key(std::uint64_t map_hash, const CandidateGrid& grid, const std::vector<Satellite>& satellites);

}  // namespace zsm

#endif  // ZSM_SM_BASELINE_HPP
