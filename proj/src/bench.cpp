#include "zsm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"

#include "zsm/conzono.hpp"
#include "zsm/hull.hpp"

namespace zsm::bench {

namespace {

constexpr int kWarmup = 10;

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

MethodSummary describe(const std::vector<double>& v) { return {quantile(v, 0.5), quantile(v, 0.25), quantile(v, 0.75)}; }

struct Trial {
  Record conzono, vertex_rep;
};

Trial run_trial(std::mt19937_64& rng, int max_vertices, int id) {
  using clock = std::chrono::steady_clock;
  const Eigen::Matrix3Xd pts = random_polytope(rng, max_vertices);
  const ConZono poly = hull_of_points(Eigen::MatrixXd(pts));
  const ConZono segment = ConZono::zonotope(Eigen::Vector3d::Zero(), Eigen::Vector3d(0.5, 0.0, 0.0));

  Trial t;
  auto t0 = clock::now();
  const ConZono sum = minkowski_sum(poly, segment);
  auto t1 = clock::now();
  t.conzono = {id, static_cast<int>(pts.cols()), Method::conzono, std::chrono::duration<double>(t1 - t0).count(),
               static_cast<int>(sum.num_generators()), static_cast<int>(poly.num_generators())};

  t0 = clock::now();
  Eigen::Matrix3Xd shifted(3, 2 * pts.cols());
  shifted.leftCols(pts.cols()) = pts.colwise() + segment.generators().col(0);
  shifted.rightCols(pts.cols()) = pts.colwise() - segment.generators().col(0);
  const auto h = hull::convex_hull_3d(shifted, 1e-12);
  t1 = clock::now();
  t.vertex_rep = {id, static_cast<int>(pts.cols()), Method::vertex_rep, std::chrono::duration<double>(t1 - t0).count(),
                  static_cast<int>(h.vertices.size()), static_cast<int>(pts.cols())};
  return t;
}

}  // namespace

Eigen::Matrix3Xd random_polytope(std::mt19937_64& rng, int max_vertices) {
  if (max_vertices < 4) throw std::invalid_argument("random_polytope: need at least 4 vertices");
  std::uniform_int_distribution<int> count(4, max_vertices);
  std::normal_distribution<double> gauss;
  const int k = count(rng);
  Eigen::Matrix3Xd pts(3, k);
  for (int i = 0; i < k; ++i) {
    Eigen::Vector3d v;
    do {
      v = {gauss(rng), gauss(rng), gauss(rng)};
    } while (v.norm() < 1e-6);
    pts.col(i) = v.normalized();
  }
  return pts;
}

const char* method_name(Method m) { return m == Method::conzono ? "conzono" : "vertex-rep"; }

Summary summarize(const std::vector<Record>& records) {
  std::vector<double> a, b;
  Summary s;
  for (const auto& r : records) {
    if (r.method == Method::conzono) {
      a.push_back(r.seconds);
      s.generator_growth_ok += r.output_size == r.input_size + 1;
    } else {
      b.push_back(r.seconds);
    }
  }
  s.trials = static_cast<int>(a.size());
  s.conzono = describe(a);
  s.vertex_rep = describe(b);
  s.median_ratio = s.conzono.median > 0.0 ? s.vertex_rep.median / s.conzono.median : 0.0;
  return s;
}

Result bench_minkowski(int trials, std::uint64_t seed, int max_vertices) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < kWarmup; ++i) run_trial(rng, max_vertices, -1);
  Result r;
  for (int i = 0; i < trials; ++i) {
    const Trial t = run_trial(rng, max_vertices, i);
    r.records.push_back(t.conzono);
    r.records.push_back(t.vertex_rep);
  }
  r.summary = summarize(r.records);
  return r;
}

void write_csv(std::ostream& out, const std::vector<Record>& records) {
  out << "trial,method,vertices,seconds,output_size\n";
  out.precision(9);
  for (const auto& r : records) {
    out << r.trial << ',' << method_name(r.method) << ',' << r.vertex_count_in << ',' << r.seconds << ',' << r.output_size
        << '\n';
  }
}

void write_summary_json(std::ostream& out, const Summary& s, std::uint64_t seed) {
  auto method = [](const MethodSummary& m) { return nlohmann::json{{"median", m.median}, {"q1", m.q1}, {"q3", m.q3}}; };
  nlohmann::json j = {
      {"schema_version", 1},
      {"seed", seed},
      {"trials", s.trials},
      {"seconds", {{"conzono", method(s.conzono)}, {"vertex_rep", method(s.vertex_rep)}}},
      {"median_ratio", s.median_ratio},
      {"generator_growth_ok", s.generator_growth_ok},
      {"timing_note", "vertex-rep time includes hull recomputation; conversion to conzono is not timed"},
  };
  out << j.dump(2) << '\n';
}

}  // namespace zsm::bench
