#include "zsm/zsm_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "zsm/log.hpp"

namespace zsm {

Visibility classify(double cno, double threshold) { return cno < threshold ? Visibility::nlos : Visibility::los; }

double elevation_deg(const Eigen::Vector3d& sat_pos) {
  const double r = sat_pos.norm();
  if (r == 0.0) return 0.0;
  return std::asin(std::clamp(sat_pos.z() / r, -1.0, 1.0)) * 180.0 / M_PI;
}

Eigen::Vector2d to_street_frame(const Eigen::Vector2d& v, const Eigen::Vector2d& street_axis) {
  const Eigen::Vector2d cross(-street_axis.y(), street_axis.x());
  return {cross.dot(v), street_axis.dot(v)};
}

std::vector<ComponentReport> street_metrics(const MultiPolygon2D& estimate, const Eigen::Vector2d& street_axis,
                                            const std::optional<Eigen::Vector2d>& truth) {
  if (std::abs(street_axis.norm() - 1.0) > 1e-9) throw std::invalid_argument("street axis must be a unit vector");
  const Measures m = poly::measures(estimate);
  std::vector<ComponentReport> out;
  for (std::size_t i = 0; i < estimate.components.size(); ++i) {
    const auto& c = estimate.components[i];
    ComponentReport r;
    r.centroid = m.centroids[i];
    r.area = m.component_areas[i];
    Eigen::Vector2d lo = to_street_frame(c.outer.front(), street_axis), hi = lo;
    for (const auto& p : c.outer) {
      const Eigen::Vector2d q = to_street_frame(p, street_axis);
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    r.widths = hi - lo;
    if (truth) {
      r.error = to_street_frame(r.centroid - *truth, street_axis).cwiseAbs();
      MultiPolygon2D single;
      single.components.push_back(c);
      r.contains_truth = poly::point_in(single, *truth);
    }
    out.push_back(r);
  }
  return out;
}

RunResult run_zsm(const BuildingSet& buildings, const Scenario& scenario, const RunOptions& options) {
  if (scenario.ground.aoi.empty()) throw std::invalid_argument("run_zsm: empty AOI");
  if (scenario.cno.size() != scenario.satellites.size()) {
    throw std::invalid_argument("run_zsm: need one C/N0 value per satellite");
  }
  check_epsilon(buildings, options.epsilon);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scenario.satellites.size(); ++i) {
    if (elevation_deg(scenario.satellites[i].position) >= scenario.min_elevation_deg) order.push_back(i);
  }
  if (order.empty()) throw std::invalid_argument("run_zsm: no usable satellites");
  if (scenario.sort_by_elevation) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return elevation_deg(scenario.satellites[a].position) > elevation_deg(scenario.satellites[b].position);
    });
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<SatelliteShadow> shadows(order.size());
  auto work = [&](std::size_t k) {
    const auto& sat = scenario.satellites[order[k]];
    shadows[k] = satellite_shadow(buildings, sat.position, scenario.ground, options.epsilon, sat.id);
  };
  const std::size_t threads = static_cast<std::size_t>(std::max(1, options.threads));
  if (threads == 1) {
    for (std::size_t k = 0; k < order.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < order.size(); k += threads) work(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  RunResult result;
  auto& report = result.report;
  MultiPolygon2D estimate = scenario.ground.aoi;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto idx = order[k];
    const Visibility label = classify(scenario.cno[idx], scenario.los_threshold);
    estimate = label == Visibility::nlos ? poly::intersection(estimate, shadows[k].region)
                                         : poly::difference(estimate, shadows[k].region);
    report.used_satellites.push_back(scenario.satellites[idx].id);
    report.labels.push_back(label);
    if (options.keep_history) result.history.push_back(estimate);
  }
  report.online_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (estimate.empty()) {
    report.empty_estimate = true;
    log::warn("estimate is empty: the LOS/NLOS classification is inconsistent with the map");
  }
  report.estimate = std::move(estimate);
  report.components = street_metrics(report.estimate, scenario.street_axis, scenario.true_position);
  return result;
}

}  // namespace zsm
