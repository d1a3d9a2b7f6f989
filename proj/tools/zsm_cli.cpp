// zsm_cli: fixtures, map preprocessing, ZSM and SM runs, raster check, Minkowski bench.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "zsm/bench.hpp"
#include "zsm/fixtures.hpp"
#include "zsm/log.hpp"
#include "zsm/mesh.hpp"
#include "zsm/scenario.hpp"
#include "zsm/serialize.hpp"
#include "zsm/shadow.hpp"
#include "zsm/sm_baseline.hpp"
#include "zsm/svg.hpp"
#include "zsm/zsm_runner.hpp"

namespace fs = std::filesystem;
using namespace zsm;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitEmpty = 3;

/// Thrown for bad flags or files; maps to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string out = ".";
  double epsilon = kDefaultEpsilon;
  std::optional<double> threshold;
  std::optional<double> min_elevation;
  bool merge = true;
  bool exclude_footprints = false;
  double grid = 10.0;
  double pitch = 0.5;
  std::uint64_t seed = 2024;
  int threads = 1;
  int trials = 1000;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path out_dir(const Flags& f) {
  fs::path dir(f.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

/// Buildings cache plus scenario with the command-line overrides applied.
struct Inputs {
  BuildingSet buildings;
  io::ScenarioFile file;
  Scenario scenario;
};

Inputs load_inputs(const std::string& buildings_path, const std::string& scenario_path, const Flags& f) {
  Inputs in;
  in.buildings = io::buildings_from_json(io::read_json_file(buildings_path));
  in.file = io::scenario_from_json(io::read_json_file(scenario_path));
  if (f.exclude_footprints) in.file.exclude_footprints = true;
  if (f.threshold) in.file.scenario.los_threshold = *f.threshold;
  if (f.min_elevation) in.file.scenario.min_elevation_deg = *f.min_elevation;
  if (in.file.scenario.satellites.empty()) throw InputError("scenario has no satellites");
  in.scenario = io::materialize(in.file, in.buildings);
  return in;
}

std::vector<Visibility> measured_labels(const Scenario& s) {
  std::vector<Visibility> out;
  for (double c : s.cno) out.push_back(classify(c, s.los_threshold));
  return out;
}

void write_svg(const fs::path& path, const Inputs& in, const MultiPolygon2D* estimate,
               const std::vector<std::pair<Eigen::Vector2d, const char*>>& points) {
  const auto footprints = all_footprints(in.buildings);
  std::vector<svg::Layer> layers{{&in.scenario.ground.aoi, "black", "none"}, {&footprints, "red", "red", 0.4}};
  if (estimate != nullptr) layers.push_back({estimate, "magenta", "magenta", 0.4});
  std::ostringstream s;
  svg::write(s, layers, points);
  write_text(path, s.str());
}

int cmd_fixture(const std::string& kind, const Flags& f) {
  Fixture fx;
  if (kind == "two-building") {
    fx = two_building_fixture(f.merge);
  } else if (kind.rfind("city-", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(kind.substr(5));
    } catch (const std::exception&) {
      throw InputError("bad fixture name " + kind);
    }
    fx = city_fixture(n);
  } else if (kind == "random") {
    fx = random_box_scene(f.seed);
  } else {
    throw InputError("unknown fixture " + kind + " (two-building, city-N, random)");
  }
  const auto dir = out_dir(f);
  std::ostringstream obj;
  write_obj(obj, fx.mesh);
  write_text(dir / "map.obj", obj.str());
  io::write_json_file((dir / "scenario.json").string(), io::scenario_to_json({fx.scenario, fx.aoi_spec, fx.exclude_footprints}));
  std::cout << fx.name << ": " << fx.boxes.size() << " buildings, " << fx.scenario.satellites.size() << " satellites -> "
            << dir.string() << '\n';
  return kExitOk;
}

int cmd_preprocess(const std::string& map_path, const Flags& f) {
  const auto mesh = load_mesh_file(map_path);
  const auto t0 = std::chrono::steady_clock::now();
  const auto buildings = build_buildings(mesh, f.merge);
  const double offline = seconds_since(t0);

  // timing goes to its own file so the cache itself is byte-for-byte reproducible
  auto cache = io::buildings_to_json(buildings, f.merge, offline);
  cache.erase("offline_seconds");
  const auto dir = out_dir(f);
  io::write_json_file((dir / "buildings.json").string(), cache);
  io::write_json_file((dir / "preprocess_timing.json").string(),
                      {{"schema_version", 1}, {"kind", "preprocess_timing"}, {"buildings", buildings.size()},
                       {"offline_seconds", offline}});
  std::size_t parts = 0;
  for (const auto& b : buildings) parts += b.parts.size();
  std::cout << buildings.size() << " buildings (" << parts << " parts) converted in " << offline << " s\n";
  return kExitOk;
}

int cmd_run_zsm(const std::string& buildings_path, const std::string& scenario_path, const Flags& f) {
  const auto in = load_inputs(buildings_path, scenario_path, f);
  RunOptions opt;
  opt.epsilon = f.epsilon;
  opt.threads = f.threads;
  const auto r = run_zsm(in.buildings, in.scenario, opt).report;

  const auto dir = out_dir(f);
  io::write_json_file((dir / "zsm_report.json").string(), io::report_to_json(r));
  std::vector<std::pair<Eigen::Vector2d, const char*>> points;
  if (in.scenario.true_position) points.emplace_back(*in.scenario.true_position, "blue");
  write_svg(dir / "zsm_estimate.svg", in, &r.estimate, points);

  std::cout << "estimate: " << r.components.size() << " components, area " << poly::area(r.estimate) << " m^2, online "
            << r.online_seconds << " s\n";
  for (const auto& c : r.components) {
    std::cout << "  centroid (" << c.centroid.x() << ", " << c.centroid.y() << ") widths cross " << c.widths.x()
              << " along " << c.widths.y();
    if (c.contains_truth) std::cout << (*c.contains_truth ? " [truth]" : "");
    std::cout << '\n';
  }
  return r.empty_estimate ? kExitEmpty : kExitOk;
}

int cmd_run_sm(const std::string& buildings_path, const std::string& scenario_path, const Flags& f) {
  if (!(f.grid > 0.0)) throw InputError("--grid must be positive");
  const auto in = load_inputs(buildings_path, scenario_path, f);
  std::vector<Satellite> sats;
  std::vector<Visibility> labels;
  const auto all_labels = measured_labels(in.scenario);
  for (std::size_t i = 0; i < in.scenario.satellites.size(); ++i) {
    if (elevation_deg(in.scenario.satellites[i].position) < in.scenario.min_elevation_deg) continue;
    sats.push_back(in.scenario.satellites[i]);
    labels.push_back(all_labels[i]);
  }

  const auto dir = out_dir(f);
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = make_grid(in.scenario.ground, f.grid);
  const auto key = visibility_key(map_hash(in.buildings), grid, sats);
  const auto cache_path = dir / "visibility_cache.json";
  VisibilityMatrix vis;
  bool cached = false;
  if (fs::exists(cache_path)) {
    try {
      cached = io::visibility_cache_from_json(io::read_json_file(cache_path.string()), key, grid, vis);
    } catch (const std::exception& e) {
      log::warn(std::string("ignoring visibility cache: ") + e.what());
    }
  }
  if (!cached) {
    vis = predict_visibility(grid, in.buildings, sats, in.scenario.ground, f.threads);
    io::write_json_file(cache_path.string(), io::visibility_cache_to_json(key, grid, vis));
  }
  const double offline = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  auto r = score_and_select(vis, labels, grid.candidates, in.scenario.street_axis);
  r.online_seconds = seconds_since(t1);
  r.offline_seconds = offline;

  io::write_json_file((dir / "sm_report.json").string(), io::sm_report_to_json(r, grid));
  std::vector<std::pair<Eigen::Vector2d, const char*>> points;
  for (std::size_t i : r.best) points.emplace_back(grid.candidates[i], "magenta");
  if (in.scenario.true_position) points.emplace_back(*in.scenario.true_position, "blue");
  write_svg(dir / "sm_candidates.svg", in, nullptr, points);

  std::cout << grid.candidates.size() << " candidates at " << f.grid << " m" << (cached ? " (cached visibility)" : "")
            << ", " << r.best.size() << " with the top score\n";
  for (std::size_t k = 0; k < r.best.size() && k < 3; ++k) {
    const auto& p = grid.candidates[r.best[k]];
    std::cout << "  (" << p.x() << ", " << p.y() << ") score " << r.scores[r.best[k]] << '\n';
  }
  std::cout << "weighted mean (" << r.weighted_mean.x() << ", " << r.weighted_mean.y() << "), bounds cross "
            << r.bounds.x() << " along " << r.bounds.y() << '\n';
  return kExitOk;
}

int cmd_oracle_check(const std::string& buildings_path, const std::string& scenario_path, const Flags& f) {
  if (!(f.pitch > 0.0)) throw InputError("--pitch must be positive");
  const auto in = load_inputs(buildings_path, scenario_path, f);
  RunOptions opt;
  opt.epsilon = f.epsilon;
  opt.threads = f.threads;
  const auto r = run_zsm(in.buildings, in.scenario, opt).report;
  const auto labels = measured_labels(in.scenario);
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < in.scenario.satellites.size(); ++i) {
    if (elevation_deg(in.scenario.satellites[i].position) >= in.scenario.min_elevation_deg) used.push_back(i);
  }

  const OcclusionTester tester(in.buildings);
  const auto m = poly::measures(in.scenario.ground.aoi);
  const double band = 2.0 * f.pitch;
  long cells = 0, agree = 0, banded = 0, expected_in = 0;
  for (double x = m.bbox.lo.x() + f.pitch / 2; x < m.bbox.hi.x(); x += f.pitch) {
    for (double y = m.bbox.lo.y() + f.pitch / 2; y < m.bbox.hi.y(); y += f.pitch) {
      const Eigen::Vector2d c(x, y);
      if (!r.estimate.empty() && poly::boundary_distance(r.estimate, c) < band) {
        ++banded;
        continue;
      }
      bool expected = poly::point_in(in.scenario.ground.aoi, c);
      const Eigen::Vector3d p(x, y, expected ? ground_height(in.scenario.ground, c) : 0.0);
      for (std::size_t k = 0; expected && k < used.size(); ++k) {
        const auto i = used[k];
        expected = tester.blocked(p, in.scenario.satellites[i].position) == (labels[i] == Visibility::nlos);
      }
      ++cells;
      expected_in += expected;
      agree += expected == poly::point_in(r.estimate, c);
    }
  }
  const double area = poly::area(r.estimate);
  const bool degenerate = area <= poly::kSliverArea;
  const double agreement = cells > 0 ? static_cast<double>(agree) / static_cast<double>(cells) : 1.0;
  const json stats = {{"schema_version", 1},
                      {"kind", "oracle_check"},
                      {"pitch", f.pitch},
                      {"band", band},
                      {"cells", cells},
                      {"banded_cells", banded},
                      {"agreeing_cells", agree},
                      {"expected_inside", expected_in},
                      {"agreement", agreement},
                      {"estimate_area", area},
                      {"degenerate_estimate", degenerate}};
  io::write_json_file((out_dir(f) / "oracle_check.json").string(), stats);
  std::cout << "agreement " << agreement << " over " << cells << " cells (" << banded << " in the " << band
            << " m boundary band)" << (degenerate ? ", estimate has zero area" : "") << '\n';
  return kExitOk;
}

int cmd_bench(const Flags& f) {
  if (f.trials < 1) throw InputError("--trials must be at least 1");
  const auto r = bench::bench_minkowski(f.trials, f.seed);
  const auto dir = out_dir(f);
  std::ostringstream csv, summary;
  bench::write_csv(csv, r.records);
  bench::write_summary_json(summary, r.summary, f.seed);
  write_text(dir / "bench.csv", csv.str());
  write_text(dir / "bench_summary.json", summary.str());
  std::cout << "median seconds: conzono " << r.summary.conzono.median << ", vertex-rep " << r.summary.vertex_rep.median
            << " (ratio " << r.summary.median_ratio << ") over " << r.summary.trials << " trials\n";
  return kExitOk;
}

int cmd_simulate(const std::string& buildings_path, const std::string& scenario_path, const Eigen::Vector2d& at,
                 bool jitter, const Flags& f) {
  auto in = load_inputs(buildings_path, scenario_path, f);
  EmulationSpec spec;
  spec.threshold = in.scenario.los_threshold;
  spec.jitter = jitter;
  spec.seed = f.seed;
  const auto e = emulate(at, in.buildings, in.scenario.satellites, in.scenario.ground, spec);
  in.file.scenario.cno = e.cno;
  in.file.scenario.true_position = at;
  io::write_json_file((out_dir(f) / "scenario.json").string(), io::scenario_to_json(in.file));
  int nlos = 0;
  for (auto l : e.labels) nlos += l == Visibility::nlos;
  std::cout << nlos << " of " << e.labels.size() << " satellites NLOS at (" << at.x() << ", " << at.y() << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zonotope shadow matching: set-valued GNSS positioning from 3-D building maps"};
  app.require_subcommand(1);
  Flags f;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", f.out, "Output directory")->capture_default_str(); };
  auto add_model = [&](CLI::App* c) {
    c->add_option("--epsilon", f.epsilon, "Shadow segment half-length (m)")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--threshold", f.threshold, "LOS/NLOS C/N0 threshold (dB-Hz); default from the scenario (38)");
    c->add_option("--min-elevation", f.min_elevation, "Drop satellites below this elevation (deg)")->check(CLI::Range(0.0, 90.0));
    c->add_flag("--exclude-footprints", f.exclude_footprints, "Remove building footprints from the AOI");
    c->add_option("--threads", f.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto add_merge = [&](CLI::App* c) { c->add_flag("--merge,!--no-merge", f.merge, "Merge buildings into one part when possible"); };

  std::string kind, map_path, buildings_path, scenario_path;
  auto* fixture = app.add_subcommand("fixture", "Write a synthetic map.obj and scenario.json");
  fixture->add_option("kind", kind, "two-building, city-N or random")->required();
  fixture->add_option("--seed", f.seed, "Seed for the random scene")->capture_default_str();
  add_merge(fixture);
  add_out(fixture);

  auto* preprocess = app.add_subcommand("preprocess", "Convert a mesh (OBJ or JSON) into a buildings cache");
  preprocess->add_option("map", map_path, "Mesh file")->required()->check(CLI::ExistingFile);
  add_merge(preprocess);
  add_out(preprocess);

  auto add_pair = [&](CLI::App* c) {
    c->add_option("buildings", buildings_path, "buildings.json from preprocess")->required()->check(CLI::ExistingFile);
    c->add_option("scenario", scenario_path, "scenario.json")->required()->check(CLI::ExistingFile);
  };
  auto* run_zsm_cmd = app.add_subcommand("run-zsm", "Set-valued position estimate");
  add_pair(run_zsm_cmd);
  add_model(run_zsm_cmd);
  add_out(run_zsm_cmd);

  auto* run_sm_cmd = app.add_subcommand("run-sm", "Grid-based shadow matching baseline");
  add_pair(run_sm_cmd);
  add_model(run_sm_cmd);
  run_sm_cmd->add_option("--grid", f.grid, "Candidate spacing (m)")->capture_default_str();
  add_out(run_sm_cmd);

  auto* oracle = app.add_subcommand("oracle-check", "Compare the estimate with a per-cell occlusion raster");
  add_pair(oracle);
  add_model(oracle);
  oracle->add_option("--pitch", f.pitch, "Raster pitch (m)")->capture_default_str();
  add_out(oracle);

  auto* bench_cmd = app.add_subcommand("bench", "Time Minkowski sums: constrained zonotopes vs vertex hulls");
  bench_cmd->add_option("--trials", f.trials, "Random polytope pairs")->capture_default_str();
  bench_cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  add_out(bench_cmd);

  std::vector<double> at;
  bool jitter = false;
  auto* simulate = app.add_subcommand("simulate", "Emulate C/N0 at a receiver position and write a new scenario");
  add_pair(simulate);
  simulate->add_option("--at", at, "Receiver position x y (m)")->required()->expected(2);
  simulate->add_flag("--jitter", jitter, "Add bounded label-preserving noise");
  simulate->add_option("--seed", f.seed, "Jitter seed")->capture_default_str();
  simulate->add_option("--threshold", f.threshold, "LOS/NLOS C/N0 threshold (dB-Hz)");
  add_out(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fixture) return cmd_fixture(kind, f);
    if (*preprocess) return cmd_preprocess(map_path, f);
    if (*run_zsm_cmd) return cmd_run_zsm(buildings_path, scenario_path, f);
    if (*run_sm_cmd) return cmd_run_sm(buildings_path, scenario_path, f);
    if (*oracle) return cmd_oracle_check(buildings_path, scenario_path, f);
    if (*bench_cmd) return cmd_bench(f);
    if (*simulate) return cmd_simulate(buildings_path, scenario_path, {at[0], at[1]}, jitter, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
