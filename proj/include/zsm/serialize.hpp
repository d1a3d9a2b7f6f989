#ifndef ZSM_SERIALIZE_HPP
#define ZSM_SERIALIZE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "zsm/conzono.hpp"
#include "zsm/map_model.hpp"
#include "zsm/polygon2d.hpp"
#include "zsm/sm_baseline.hpp"
#include "zsm/zsm_runner.hpp"

namespace zsm::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Missing field, wrong type or unsupported schema_version.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

json to_json(const ConZono& z);
ConZono conzono_from_json(const json& j);

/// GeoJSON-style {"type": "MultiPolygon", "coordinates": [[[[x, y], ...], hole...], ...]}, rings closed.
json to_json(const MultiPolygon2D& mp);
MultiPolygon2D multipolygon_from_json(const json& j);

json buildings_to_json(const BuildingSet& buildings, bool merged, double offline_seconds);
BuildingSet buildings_from_json(const json& j);

/// Scenario as stored on disk: the AOI is kept as polygons and built against the map on load.
struct ScenarioFile {
  Scenario scenario;  // ground left empty
  std::vector<GroundSpec> aoi;
  bool exclude_footprints = false;
};

/// Satellites may be given by "position" [e, n, u] or by "azimuth", "elevation" (deg) and optional "range" (m).
ScenarioFile scenario_from_json(const json& j);
json scenario_to_json(const ScenarioFile& s);

/// Scenario with its ground model built for these buildings.
Scenario materialize(const ScenarioFile& s, const BuildingSet& buildings);

json report_to_json(const EstimateReport& r);
json sm_report_to_json(const SmReport& r, const CandidateGrid& grid, std::size_t max_best = 3);

json visibility_cache_to_json(std::uint64_t key, const CandidateGrid& grid, const VisibilityMatrix& vis);
/// True and fills `vis` when the cache matches `key` and the grid size.
bool visibility_cache_from_json(const json& j, std::uint64_t key, const CandidateGrid& grid, VisibilityMatrix& vis);

}  // namespace zsm::io

#endif  // ZSM_SERIALIZE_HPP
