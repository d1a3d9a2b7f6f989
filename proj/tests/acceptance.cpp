// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "oracles.hpp"
#include "zsm/bench.hpp"
#include "zsm/fixtures.hpp"
#include "zsm/sm_baseline.hpp"
#include "zsm/vertices.hpp"
#include "zsm/zsm_runner.hpp"

using namespace zsm;
using Eigen::MatrixXd;
using Eigen::Vector2d;

namespace {

// Pinned tolerances and sizes.
constexpr int kContainmentScenes = 100;
constexpr double kContainmentBudgetSeconds = 60.0;
constexpr int kOrderScenes = 10;
constexpr int kOrderPermutations = 20;
constexpr double kOrderRelTol = 1e-6;
constexpr double kRasterPitch = 0.5;
constexpr double kRasterBand = 1.0;
constexpr double kRasterAgreement = 0.99;
constexpr int kSetOpPairs = 200;
constexpr double kHausdorffTol = 1e-6;
constexpr double kDedupTol = 1e-9;
constexpr int kBenchTrials = 1000;
constexpr std::uint64_t kBenchSeed = 2024;
constexpr double kBenchMinRatio = 2.0;
constexpr double kBenchBudgetSeconds = 300.0;
constexpr double kSmSpacing = 5.0;
constexpr double kTrendTol = 1e-6;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

void containment() {
  const auto t0 = std::chrono::steady_clock::now();
  int inside = 0, empty = 0;
  std::string first_miss;
  for (int seed = 1; seed <= kContainmentScenes; ++seed) {
    const auto f = random_box_scene(static_cast<std::uint64_t>(seed));
    const auto r = run_zsm(f.buildings, f.scenario).report;
    empty += r.empty_estimate;
    if (poly::point_in(r.estimate, *f.scenario.true_position)) {
      ++inside;
    } else if (first_miss.empty()) {
      first_miss = " first miss: seed " + std::to_string(seed);
    }
  }
  const double t = seconds_since(t0);
  report(1, "containment", inside == kContainmentScenes && t < kContainmentBudgetSeconds,
         fmt("%d/%d scenes contain the truth, %d empty, %.2f s (budget %.0f s)", inside, kContainmentScenes, empty, t,
             kContainmentBudgetSeconds) +
             first_miss);
}

void order_invariance() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  int runs = 0;
  for (int seed = 1; seed <= kOrderScenes; ++seed) {
    const auto f = random_box_scene(static_cast<std::uint64_t>(1000 + seed));
    const double aoi_area = poly::area(f.scenario.ground.aoi);
    const auto reference = run_zsm(f.buildings, f.scenario).report.estimate;
    std::vector<std::size_t> perm(f.scenario.satellites.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < kOrderPermutations; ++k) {
      std::shuffle(perm.begin(), perm.end(), rng);
      Scenario s = f.scenario;
      for (std::size_t i = 0; i < perm.size(); ++i) {
        s.satellites[i] = f.scenario.satellites[perm[i]];
        s.cno[i] = f.scenario.cno[perm[i]];
      }
      const auto est = run_zsm(f.buildings, s).report.estimate;
      worst = std::max(worst, poly::sym_diff_area(est, reference) / aoi_area);
      ++runs;
    }
  }
  report(2, "order invariance", worst <= kOrderRelTol,
         fmt("%d permuted runs, max sym_diff/AOI = %.3g (tol %.0e)", runs, worst, kOrderRelTol));
}

/// Raster oracle: a cell belongs to the estimate iff it is in the AOI and its
/// occlusion pattern (independent slab test) matches every label.
struct RasterStats {
  long cells = 0, agree = 0, banded = 0;
};

RasterStats raster_check(const Fixture& f) {
  const auto r = run_zsm(f.buildings, f.scenario).report;
  std::vector<Visibility> labels;
  for (double c : f.scenario.cno) labels.push_back(classify(c, f.scenario.los_threshold));

  Vector2d lo = f.aoi_spec[0].polygon[0], hi = lo;
  for (const auto& p : f.aoi_spec[0].polygon) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  auto in_aoi = [&](const Vector2d& x) {
    if ((x.array() < lo.array()).any() || (x.array() > hi.array()).any()) return false;
    if (!f.exclude_footprints) return true;
    for (const auto& b : f.boxes) {
      if (x.x() > b.x0 && x.x() < b.x1 && x.y() > b.y0 && x.y() < b.y1) return false;
    }
    return true;
  };

  RasterStats s;
  for (double x = lo.x() + kRasterPitch / 2; x < hi.x(); x += kRasterPitch) {
    for (double y = lo.y() + kRasterPitch / 2; y < hi.y(); y += kRasterPitch) {
      const Vector2d c(x, y);
      if (poly::boundary_distance(r.estimate, c) < kRasterBand) {
        ++s.banded;
        continue;
      }
      bool expected = in_aoi(c);
      for (std::size_t k = 0; expected && k < labels.size(); ++k) {
        expected = oracle::occluded(f.boxes, c, f.scenario.satellites[k].position) == (labels[k] == Visibility::nlos);
      }
      ++s.cells;
      s.agree += expected == poly::point_in(r.estimate, c);
    }
  }
  return s;
}

void raster_oracle() {
  const auto two = raster_check(two_building_fixture());
  const auto city = raster_check(city_fixture(8));
  const double a = static_cast<double>(two.agree) / static_cast<double>(two.cells);
  const double b = static_cast<double>(city.agree) / static_cast<double>(city.cells);
  report(3, "raster oracle", a >= kRasterAgreement && b >= kRasterAgreement,
         fmt("two-building %.4f of %ld cells, city-8 %.4f of %ld cells (need %.2f, %.1f m band, %.1f m pitch)", a,
             two.cells, b, city.cells, kRasterAgreement, kRasterBand, kRasterPitch));
}

// ---------------------------------------------------------------------------

struct Pair {
  ConZono a, b;
};

Pair random_pair(std::mt19937_64& rng, int dim) {
  // 3-D operands stay at m <= 5 so the brute-force lifted-vertex and facet oracles remain tractable.
  const int max_m = dim == 2 ? 8 : 5;
  std::uniform_int_distribution<int> gen(dim, max_m);
  auto one = [&] {
    const int m = gen(rng);
    std::uniform_int_distribution<int> con(0, std::min(3, m - dim));
    return oracle::random_conzono(rng, dim, m, con(rng));
  };
  ConZono a = one();
  ConZono b = one();
  return {a, b};
}

struct OpStats {
  int pairs = 0, passed = 0, nonempty = 0;
  double worst_hausdorff = 0.0;
  std::string first_failure;
};

void record(OpStats& s, bool ok, double h, int trial) {
  ++s.pairs;
  s.passed += ok;
  if (std::isfinite(h)) s.worst_hausdorff = std::max(s.worst_hausdorff, h);
  if (!ok && s.first_failure.empty()) s.first_failure = " first failure at pair " + std::to_string(trial);
}

/// Vertex list vs oracle vertex set: same count after dedup and Hausdorff within tolerance.
bool vertex_sets_match(const MatrixXd& ours, const MatrixXd& expected, double& h) {
  if (ours.cols() == 0 || expected.cols() == 0) {
    h = ours.cols() == expected.cols() ? 0.0 : std::numeric_limits<double>::infinity();
    return ours.cols() == expected.cols();
  }
  h = oracle::normalized_hausdorff(ours, expected);
  return h <= kHausdorffTol && ours.cols() == oracle::extreme_points(expected, kDedupTol).cols();
}

void set_operations() {
  std::mt19937_64 rng(4242);
  VertexOptions wide;
  wide.max_generators = 64;
  OpStats sum, meet, hull;
  for (int t = 0; t < kSetOpPairs; ++t) {
    const int dim = t % 2 ? 3 : 2;
    const auto p = random_pair(rng, dim);
    const MatrixXd va = oracle::vertex_set(p.a), vb = oracle::vertex_set(p.b);

    // sum: hull(W) == hull(pairwise sums), checked through the facets of W.
    {
      const MatrixXd w = vertices(minkowski_sum(p.a, p.b));
      const MatrixXd q = oracle::pairwise_sums(va, vb);
      const double diam = std::max(1.0, (q.rowwise().maxCoeff() - q.rowwise().minCoeff()).norm());
      bool ok = w.cols() > 0;
      for (Eigen::Index i = 0; ok && i < w.cols(); ++i) {
        ok = (q.colwise() - w.col(i)).colwise().norm().minCoeff() <= kHausdorffTol * diam;
      }
      const auto fw = oracle::facets(w);
      for (Eigen::Index i = 0; ok && i < q.cols(); ++i) {
        for (const auto& h : fw) ok = ok && h.normal.dot(q.col(i)) <= h.offset + kHausdorffTol * diam;
      }
      ok = ok && oracle::extreme_points(w, kDedupTol).cols() == w.cols();
      double h = std::numeric_limits<double>::infinity();
      if (ok) {
        const MatrixXd expected = oracle::points_on_facets(q, fw, 1e-7 * diam);
        h = oracle::normalized_hausdorff(w, expected);
        ok = h <= kHausdorffTol;
      }
      sum.nonempty += w.cols() > 0;
      record(sum, ok, h, t);
    }
    // intersection: halfspace oracle
    {
      auto hs = oracle::facets(va);
      const auto hb = oracle::facets(vb);
      hs.insert(hs.end(), hb.begin(), hb.end());
      const MatrixXd expected = oracle::halfspace_vertices(hs, dim);
      const MatrixXd w = vertices(intersect(p.a, p.b));
      double h = 0.0;
      const bool ok = vertex_sets_match(w, expected, h);
      meet.nonempty += w.cols() > 0;
      record(meet, ok, h, t);
    }
    // convex hull: extreme points of the union of vertex sets
    {
      MatrixXd both(dim, va.cols() + vb.cols());
      both << va, vb;
      const MatrixXd expected = oracle::extreme_points(both);
      const MatrixXd w = vertices(convex_hull_pair(p.a, p.b), wide);
      double h = 0.0;
      const bool ok = vertex_sets_match(w, expected, h);
      hull.nonempty += w.cols() > 0;
      record(hull, ok, h, t);
    }
  }
  const bool pass = sum.passed == sum.pairs && meet.passed == meet.pairs && hull.passed == hull.pairs;
  report(4, "set operations", pass,
         fmt("sum %d/%d (max H %.2g), intersect %d/%d (%d nonempty, max H %.2g), hull %d/%d (max H %.2g)", sum.passed,
             sum.pairs, sum.worst_hausdorff, meet.passed, meet.pairs, meet.nonempty, meet.worst_hausdorff, hull.passed,
             hull.pairs, hull.worst_hausdorff) +
             sum.first_failure + meet.first_failure + hull.first_failure);
}

// ---------------------------------------------------------------------------

void growth_and_benchmark() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = bench::bench_minkowski(kBenchTrials, kBenchSeed, 100);
  const double t = seconds_since(t0);
  {
    std::ofstream csv("acceptance_bench.csv");
    bench::write_csv(csv, result.records);
  }

  // block dimensions on random pairs
  std::mt19937_64 rng(77);
  int blocks_ok = 0, blocks = 0;
  for (int k = 0; k < kSetOpPairs; ++k) {
    const auto p = random_pair(rng, k % 2 ? 3 : 2);
    const auto m1 = p.a.num_generators(), m2 = p.b.num_generators();
    const auto p1 = p.a.num_constraints(), p2 = p.b.num_constraints();
    const auto n = p.a.dim();
    const auto s = minkowski_sum(p.a, p.b);
    const auto i = intersect(p.a, p.b);
    const auto h = convex_hull_pair(p.a, p.b);
    blocks += 3;
    blocks_ok += s.num_generators() == m1 + m2 && s.num_constraints() == p1 + p2;
    blocks_ok += i.num_generators() == m1 + m2 && i.num_constraints() == p1 + p2 + n;
    blocks_ok += h.num_generators() == 3 * (m1 + m2) + 1 && h.num_constraints() == p1 + p2 + 2 * (m1 + m2);
  }
  const auto& s = result.summary;
  report(5, "representation growth", s.generator_growth_ok == kBenchTrials && blocks_ok == blocks,
         fmt("+1 generator in %d/%d bench trials, block dimensions %d/%d", s.generator_growth_ok, kBenchTrials, blocks_ok,
             blocks));
  report(6, "benchmark direction", s.median_ratio >= kBenchMinRatio && t < kBenchBudgetSeconds,
         fmt("median vertex-rep %.3g ms vs conzono %.3g ms, ratio %.1f (need >= %.0f), %.1f s, records in "
             "acceptance_bench.csv",
             1e3 * s.vertex_rep.median, 1e3 * s.conzono.median, s.median_ratio, kBenchMinRatio, t));
}

void zsm_vs_sm() {
  const auto f = two_building_fixture();
  const auto r = run_zsm(f.buildings, f.scenario).report;
  const auto grid = make_grid(f.scenario.ground, kSmSpacing);
  const auto vis = predict_visibility(grid, f.buildings, f.scenario.satellites, f.scenario.ground);
  std::vector<Visibility> measured;
  for (double c : f.scenario.cno) measured.push_back(classify(c, f.scenario.los_threshold));
  const auto sm = score_and_select(vis, measured, grid.candidates, f.scenario.street_axis);

  const int full = static_cast<int>(measured.size());
  int perfect = 0, perfect_inside = 0;
  for (std::size_t i = 0; i < grid.candidates.size(); ++i) {
    if (sm.scores[i] != full) continue;
    ++perfect;
    perfect_inside += poly::point_in(r.estimate, grid.candidates[i]);
  }
  const ComponentReport* truth = nullptr;
  for (const auto& c : r.components) {
    if (c.contains_truth && *c.contains_truth) truth = &c;
  }
  const bool narrower = truth && (truth->widths.array() < sm.bounds.array()).all();
  report(7, "zsm vs sm", perfect > 0 && perfect_inside == perfect && narrower,
         fmt("%d/%d perfect-score candidates inside the estimate; truth component widths (%.2f, %.2f) vs SM bounds "
             "(%.2f, %.2f) m",
             perfect_inside, perfect, truth ? truth->widths.x() : -1.0, truth ? truth->widths.y() : -1.0, sm.bounds.x(),
             sm.bounds.y()));
}

void grid_counts() {
  const auto f = city_fixture(8);
  const auto g30 = make_grid(f.scenario.ground, 30).candidates.size();
  const auto g10 = make_grid(f.scenario.ground, 10).candidates.size();
  bool oracle_ok = true;
  for (double spacing : {30.0, 10.0, 7.5, 5.0, 3.0}) {
    oracle_ok = oracle_ok && static_cast<int>(make_grid(f.scenario.ground, spacing).candidates.size()) ==
                                 oracle::lattice_count({-60, -60}, {60, 60}, spacing, f.boxes);
  }
  report(8, "grid counts", g30 == 16 && g10 == 97 && oracle_ok,
         fmt("30 m: %zu (need 16), 10 m: %zu (need 97), lattice oracle %s", g30, g10, oracle_ok ? "agrees" : "differs"));
}

void classification() {
  const bool ok = classify(38.0, 38.0) == Visibility::los && classify(37.999, 38.0) == Visibility::nlos;
  report(9, "classification boundary", ok, "classify(38,38)=LOS, classify(37.999,38)=NLOS");
}

void trend() {
  std::vector<int> counts;
  std::vector<double> areas;
  std::vector<Vector2d> widths;
  std::vector<MultiPolygon2D> truth_parts;
  for (int n : {8, 14, 20}) {
    const auto f = city_fixture(n);
    const auto r = run_zsm(f.buildings, f.scenario).report;
    counts.push_back(static_cast<int>(r.components.size()));
    double area = -1.0;
    Vector2d w = Vector2d::Constant(-1.0);
    for (std::size_t k = 0; k < r.components.size(); ++k) {
      if (r.components[k].contains_truth && *r.components[k].contains_truth) {
        area = r.components[k].area;
        w = r.components[k].widths;
        MultiPolygon2D part;
        part.components.push_back(r.estimate.components[k]);
        truth_parts.push_back(part);
      }
    }
    areas.push_back(area);
    widths.push_back(w);
  }
  bool ok = truth_parts.size() == 3;
  for (std::size_t k = 1; ok && k < counts.size(); ++k) {
    ok = counts[k] >= counts[k - 1] && areas[k] <= areas[k - 1] + kTrendTol &&
         (widths[k].array() <= widths[k - 1].array() + kTrendTol).all() &&
         poly::area(poly::difference(truth_parts[k], truth_parts[k - 1])) <= kTrendTol;
  }
  report(10, "sensitivity trend", ok,
         fmt("components %d -> %d -> %d; truth component area %.1f -> %.1f -> %.1f m^2", counts[0], counts[1], counts[2],
             areas[0], areas[1], areas[2]));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {containment,          order_invariance, raster_oracle,  set_operations,
                                                       growth_and_benchmark, zsm_vs_sm,        grid_counts,    classification,
                                                       trend};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL (exception) %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
