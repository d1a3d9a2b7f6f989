#ifndef ZSM_ZSM_RUNNER_HPP
#define ZSM_ZSM_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zsm/map_model.hpp"
#include "zsm/polygon2d.hpp"
#include "zsm/shadow.hpp"

namespace zsm {

enum class Visibility { los, nlos };

/// NLOS iff cno < threshold (equality is LOS).
Visibility classify(double cno, double threshold);

inline constexpr double kDefaultThreshold = 38.0;
inline constexpr double kDefaultRange = 2.0e7;

struct Satellite {
  std::string id;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // ENU metres
};

struct Scenario {
  std::vector<Satellite> satellites;
  std::vector<double> cno;  // dB-Hz, one per satellite
  double los_threshold = kDefaultThreshold;
  GroundModel ground;
  Eigen::Vector2d street_axis = Eigen::Vector2d::UnitY();  // along-street unit vector
  std::optional<Eigen::Vector2d> true_position;
  double min_elevation_deg = 0.0;
  bool sort_by_elevation = false;
};

/// Elevation of a satellite seen from the ENU origin, degrees.
double elevation_deg(const Eigen::Vector3d& sat_pos);

struct ComponentReport {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  Eigen::Vector2d widths = Eigen::Vector2d::Zero();  // (cross, along) m
  double area = 0.0;
  std::optional<bool> contains_truth;
  std::optional<Eigen::Vector2d> error;  // |centroid - truth| as (cross, along) m
};

struct EstimateReport {
  MultiPolygon2D estimate;
  std::vector<ComponentReport> components;
  std::vector<std::string> used_satellites;  // processing order
  std::vector<Visibility> labels;            // parallel to used_satellites
  bool empty_estimate = false;
  double offline_seconds = 0.0;
  double online_seconds = 0.0;
};

struct RunOptions {
  double epsilon = kDefaultEpsilon;
  int threads = 1;
  /// Keep the estimate after every satellite in RunResult::history.
  bool keep_history = false;
};

struct RunResult {
  EstimateReport report;
  std::vector<MultiPolygon2D> history;  // filled when keep_history
};

/**
 * Sequential set-valued estimation: start from the AOI, then for each
 * satellite intersect with its shadow (NLOS) or remove it (LOS).
 * An empty result is returned with a warning, not an error.
 * Throws std::invalid_argument for an empty AOI or no usable satellites.
 */
RunResult run_zsm(const BuildingSet& buildings, const Scenario& scenario, const RunOptions& options = {});

/// Per-component centroids, street-frame widths and truth errors.
std::vector<ComponentReport> street_metrics(const MultiPolygon2D& estimate, const Eigen::Vector2d& street_axis,
                                            const std::optional<Eigen::Vector2d>& truth);

/// (cross, along) coordinates of a vector for the given along-street axis.
Eigen::Vector2d to_street_frame(const Eigen::Vector2d& v, const Eigen::Vector2d& street_axis);

}  // namespace zsm

#endif  // ZSM_ZSM_RUNNER_HPP
