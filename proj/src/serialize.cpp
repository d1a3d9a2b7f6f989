#include "zsm/serialize.hpp"

#include <fstream>
#include <sstream>

#include "zsm/scenario.hpp"

namespace zsm::io {

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// Row-major nested arrays with an explicit shape so empty blocks survive.
json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Eigen::VectorXd vec_from(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd mat_from(const json& j) {
  const auto r = j.at("rows").get<Eigen::Index>(), c = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != r) throw SchemaError("matrix row count mismatch");
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Eigen::VectorXd row = vec_from(data[static_cast<std::size_t>(i)]);
    if (row.size() != c) throw SchemaError("matrix column count mismatch");
    m.row(i) = row.transpose();
  }
  return m;
}

json ring_json(const Ring& r) {
  json a = json::array();
  for (const auto& p : r) a.push_back({p.x(), p.y()});
  if (!r.empty()) a.push_back({r.front().x(), r.front().y()});
  return a;
}

Ring ring_from(const json& j) {
  Ring r;
  for (const auto& p : j) {
    if (p.size() != 2) throw SchemaError("ring point must have two coordinates");
    r.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  if (r.size() > 1 && r.front() == r.back()) r.pop_back();
  return r;
}

void check_version(const json& j, const char* what) {
  if (!j.contains("schema_version")) throw SchemaError(std::string(what) + ": missing schema_version");
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw SchemaError(std::string(what) + ": unsupported schema_version " + j.at("schema_version").dump());
  }
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

const char* label_name(Visibility v) { return v == Visibility::los ? "LOS" : "NLOS"; }

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

json to_json(const ConZono& z) {
  return {{"center", vec_json(z.center())},
          {"generators", mat_json(z.generators())},
          {"con_matrix", mat_json(z.con_matrix())},
          {"con_vector", vec_json(z.con_vector())}};
}

ConZono conzono_from_json(const json& j) {
  return guarded("conzono", [&] {
    return ConZono(vec_from(j.at("center")), mat_from(j.at("generators")), mat_from(j.at("con_matrix")),
                   vec_from(j.at("con_vector")));
  });
}

json to_json(const MultiPolygon2D& mp) {
  json coords = json::array();
  for (const auto& c : mp.components) {
    json rings = json::array();
    rings.push_back(ring_json(c.outer));
    for (const auto& h : c.holes) rings.push_back(ring_json(h));
    coords.push_back(rings);
  }
  return {{"type", "MultiPolygon"}, {"coordinates", coords}};
}

MultiPolygon2D multipolygon_from_json(const json& j) {
  return guarded("multipolygon", [&] {
    if (j.at("type").get<std::string>() != "MultiPolygon") throw SchemaError("expected type MultiPolygon");
    MultiPolygon2D mp;
    for (const auto& comp : j.at("coordinates")) {
      if (comp.empty()) continue;
      Polygon p;
      p.outer = ring_from(comp[0]);
      for (std::size_t k = 1; k < comp.size(); ++k) p.holes.push_back(ring_from(comp[k]));
      mp.components.push_back(std::move(p));
    }
    return mp;
  });
}

json buildings_to_json(const BuildingSet& buildings, bool merged, double offline_seconds) {
  json list = json::array();
  for (const auto& b : buildings) {
    json parts = json::array();
    for (const auto& p : b.parts) parts.push_back(to_json(p));
    list.push_back({{"id", b.id}, {"anchor", vec_json(b.anchor)}, {"footprint", to_json(b.footprint)}, {"parts", parts}});
  }
  std::ostringstream hash;
  hash << std::hex << map_hash(buildings);
  return {{"schema_version", kSchemaVersion},
          {"kind", "buildings"},
          {"map_hash", hash.str()},
          {"merged", merged},
          {"offline_seconds", offline_seconds},
          {"buildings", list}};
}

BuildingSet buildings_from_json(const json& j) {
  check_version(j, "buildings");
  return guarded("buildings", [&] {
    BuildingSet out;
    for (const auto& jb : j.at("buildings")) {
      Building b;
      b.id = jb.at("id").get<std::string>();
      for (const auto& jp : jb.at("parts")) b.parts.push_back(conzono_from_json(jp));
      if (b.parts.empty()) throw SchemaError("building " + b.id + " has no parts");
      const Eigen::VectorXd anchor = vec_from(jb.at("anchor"));
      if (anchor.size() != 3) throw SchemaError("anchor must be 3-D");
      b.anchor = anchor;
      b.footprint = multipolygon_from_json(jb.at("footprint"));
      out.push_back(std::move(b));
    }
    return out;
  });
}

ScenarioFile scenario_from_json(const json& j) {
  check_version(j, "scenario");
  return guarded("scenario", [&] {
    ScenarioFile f;
    auto& s = f.scenario;
    for (const auto& js : j.at("satellites")) {
      Satellite sat;
      sat.id = js.at("id").get<std::string>();
      if (js.contains("position")) {
        const Eigen::VectorXd p = vec_from(js.at("position"));
        if (p.size() != 3) throw SchemaError("satellite position must be 3-D");
        sat.position = p;
      } else {
        sat.position = sat_position(js.at("azimuth").get<double>(), js.at("elevation").get<double>(),
                                    js.value("range", kDefaultRange));
      }
      s.satellites.push_back(sat);
    }
    for (const auto& c : j.at("cno")) s.cno.push_back(c.get<double>());
    if (s.cno.size() != s.satellites.size()) throw SchemaError("need one cno value per satellite");
    s.los_threshold = j.value("threshold", kDefaultThreshold);
    if (!std::isfinite(s.los_threshold)) throw SchemaError("threshold must be finite");
    if (j.contains("street_axis")) {
      const Eigen::VectorXd a = vec_from(j.at("street_axis"));
      if (a.size() != 2 || a.norm() == 0.0) throw SchemaError("street_axis must be a nonzero 2-D vector");
      s.street_axis = a.normalized();
    }
    if (j.contains("true_position") && !j.at("true_position").is_null()) {
      const Eigen::VectorXd t = vec_from(j.at("true_position"));
      if (t.size() != 2) throw SchemaError("true_position must be 2-D");
      s.true_position = Eigen::Vector2d(t);
    }
    s.min_elevation_deg = j.value("min_elevation_deg", 0.0);
    s.sort_by_elevation = j.value("sort_by_elevation", false);
    const auto& aoi = j.at("aoi");
    for (const auto& jp : aoi.at("polygons")) f.aoi.push_back({ring_from(jp.at("ring")), jp.value("height", 0.0)});
    if (f.aoi.empty()) throw SchemaError("aoi has no polygons");
    f.exclude_footprints = aoi.value("exclude_footprints", false);
    return f;
  });
}

json scenario_to_json(const ScenarioFile& f) {
  const auto& s = f.scenario;
  json sats = json::array();
  for (const auto& sat : s.satellites) sats.push_back({{"id", sat.id}, {"position", vec_json(sat.position)}});
  json polys = json::array();
  for (const auto& g : f.aoi) polys.push_back({{"ring", ring_json(g.polygon)}, {"height", g.height}});
  json j = {{"schema_version", kSchemaVersion},
            {"kind", "scenario"},
            {"satellites", sats},
            {"cno", s.cno},
            {"threshold", s.los_threshold},
            {"street_axis", vec_json(s.street_axis)},
            {"min_elevation_deg", s.min_elevation_deg},
            {"sort_by_elevation", s.sort_by_elevation},
            {"aoi", {{"polygons", polys}, {"exclude_footprints", f.exclude_footprints}}}};
  j["true_position"] = s.true_position ? vec_json(*s.true_position) : json(nullptr);
  return j;
}

Scenario materialize(const ScenarioFile& f, const BuildingSet& buildings) {
  Scenario s = f.scenario;
  s.ground = aoi_from(f.aoi, f.exclude_footprints, buildings);
  return s;
}

json report_to_json(const EstimateReport& r) {
  json comps = json::array();
  for (const auto& c : r.components) {
    json jc = {{"centroid", vec_json(c.centroid)}, {"widths_cross_along", vec_json(c.widths)}, {"area", c.area}};
    if (c.contains_truth) jc["contains_truth"] = *c.contains_truth;
    if (c.error) jc["error_cross_along"] = vec_json(*c.error);
    comps.push_back(jc);
  }
  json labels = json::array();
  for (std::size_t i = 0; i < r.used_satellites.size(); ++i) {
    labels.push_back({{"id", r.used_satellites[i]}, {"label", label_name(r.labels[i])}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "zsm_report"},
          {"estimate", to_json(r.estimate)},
          {"components", comps},
          {"satellites", labels},
          {"empty_estimate", r.empty_estimate},
          {"timing", {{"offline_seconds", r.offline_seconds}, {"online_seconds", r.online_seconds}}}};
}

json sm_report_to_json(const SmReport& r, const CandidateGrid& grid, std::size_t max_best) {
  json best = json::array();
  for (std::size_t i = 0; i < r.best.size() && i < max_best; ++i) {
    const auto& p = grid.candidates[r.best[i]];
    best.push_back({{"position", {p.x(), p.y()}}, {"score", r.scores[r.best[i]]}});
  }
  json cands = json::array();
  for (std::size_t i = 0; i < grid.candidates.size(); ++i) {
    cands.push_back({grid.candidates[i].x(), grid.candidates[i].y(), r.scores[i]});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "sm_report"},
          {"spacing", grid.spacing},
          {"candidate_count", grid.candidates.size()},
          {"best_count", r.best.size()},
          {"best", best},
          {"candidates_x_y_score", cands},
          {"weighted_mean", vec_json(r.weighted_mean)},
          {"weighted_cov", {{r.weighted_cov(0, 0), r.weighted_cov(0, 1)}, {r.weighted_cov(1, 0), r.weighted_cov(1, 1)}}},
          {"bounds_cross_along", vec_json(r.bounds)},
          {"uniform_fallback", r.uniform_fallback},
          {"timing", {{"offline_seconds", r.offline_seconds}, {"online_seconds", r.online_seconds}}}};
}

json visibility_cache_to_json(std::uint64_t key, const CandidateGrid& grid, const VisibilityMatrix& vis) {
  std::ostringstream k;
  k << std::hex << key;
  json rows = json::array();
  for (Eigen::Index i = 0; i < vis.rows(); ++i) {
    std::string bits;
    for (Eigen::Index j = 0; j < vis.cols(); ++j) bits.push_back(vis(i, j) ? '1' : '0');
    rows.push_back(bits);
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "visibility_map"},
          {"key", k.str()},
          {"spacing", grid.spacing},
          {"candidate_count", grid.candidates.size()},
          {"satellite_count", vis.cols()},
          {"los", rows}};
}

bool visibility_cache_from_json(const json& j, std::uint64_t key, const CandidateGrid& grid, VisibilityMatrix& vis) {
  try {
    check_version(j, "visibility map");
    std::ostringstream k;
    k << std::hex << key;
    if (j.at("key").get<std::string>() != k.str()) return false;
    if (j.at("candidate_count").get<std::size_t>() != grid.candidates.size()) return false;
    const auto cols = j.at("satellite_count").get<Eigen::Index>();
    const auto& rows = j.at("los");
    VisibilityMatrix v(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto bits = rows[i].get<std::string>();
      if (static_cast<Eigen::Index>(bits.size()) != cols) return false;
      for (Eigen::Index c = 0; c < cols; ++c) v(static_cast<Eigen::Index>(i), c) = bits[static_cast<std::size_t>(c)] == '1';
    }
    vis = std::move(v);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace zsm::io
