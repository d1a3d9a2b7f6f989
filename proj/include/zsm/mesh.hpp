#ifndef ZSM_MESH_HPP
#define ZSM_MESH_HPP

#include <array>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zsm {

struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

enum class MeshFormat { obj, json };

struct MeshLoadOptions {
  bool fan_triangulate = true;
  /// Triangles below this area (m^2) are dropped with a warning.
  double min_triangle_area = 1e-9;
};

class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/**
 * OBJ subset: `v x y z [w]` and `f i j k ...` records (1-based or negative
 * indices, `i/t/n` tokens accepted, polygons fan-split). Every other record
 * is ignored.
 *
 * JSON: {"vertices": [[x,y,z], ...], "triangles": [[i,j,k], ...]} with
 * 0-based indices.
 */
TriangleMesh load_mesh(std::istream& in, MeshFormat format, const MeshLoadOptions& options = {});

/// Format chosen from the extension (.obj or .json).
TriangleMesh load_mesh_file(const std::string& path, const MeshLoadOptions& options = {});

void write_obj(std::ostream& out, const TriangleMesh& mesh);

/// Connected components of the triangle/vertex graph, vertices closer than
/// `weld_tol` treated as one. Components ordered by their first triangle.
std::vector<TriangleMesh> segment_buildings(const TriangleMesh& mesh, double weld_tol = 1e-6);

/// Closed, outward-oriented 12-triangle box.
TriangleMesh box_mesh(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi);

/// Concatenation (indices shifted).
TriangleMesh merge_meshes(const std::vector<TriangleMesh>& parts);

}  // namespace zsm

#endif  // ZSM_MESH_HPP
