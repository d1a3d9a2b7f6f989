#include "zsm/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "json.hpp"

#include "zsm/log.hpp"

namespace zsm {

namespace {

double triangle_area(const TriangleMesh& m, const std::array<int, 3>& t) {
  const auto& a = m.vertices[static_cast<std::size_t>(t[0])];
  const auto& b = m.vertices[static_cast<std::size_t>(t[1])];
  const auto& c = m.vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * (b - a).cross(c - a).norm();
}

void drop_degenerate(TriangleMesh& m, double min_area) {
  std::size_t dropped = 0;
  std::vector<std::array<int, 3>> kept;
  kept.reserve(m.triangles.size());
  for (const auto& t : m.triangles) {
    if (triangle_area(m, t) < min_area) {
      ++dropped;
    } else {
      kept.push_back(t);
    }
  }
  if (dropped) log::warn("mesh: dropped " + std::to_string(dropped) + " degenerate triangle(s)");
  m.triangles = std::move(kept);
}

int obj_index(const std::string& token, std::size_t vertex_count, int line) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw MeshParseError(line, "bad face index '" + token + "'");
  }
  const int n = static_cast<int>(vertex_count);
  const int resolved = idx > 0 ? idx - 1 : n + idx;
  if (idx == 0 || resolved < 0 || resolved >= n) throw MeshParseError(line, "face index out of range: " + token);
  return resolved;
}

TriangleMesh load_obj(std::istream& in, const MeshLoadOptions& options) {
  TriangleMesh mesh;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream ss(text);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) throw MeshParseError(line, "vertex needs three coordinates");
      if (!p.allFinite()) throw MeshParseError(line, "non-finite vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string tok;
      while (ss >> tok) face.push_back(obj_index(tok, mesh.vertices.size(), line));
      if (face.size() < 3) throw MeshParseError(line, "face with fewer than three vertices");
      if (face.size() > 3 && !options.fan_triangulate) throw MeshParseError(line, "non-triangular face");
      for (std::size_t k = 1; k + 1 < face.size(); ++k) mesh.triangles.push_back({face[0], face[k], face[k + 1]});
    }
  }
  return mesh;
}

TriangleMesh load_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw MeshParseError(0, e.what());
  }
  TriangleMesh mesh;
  try {
    for (const auto& v : j.at("vertices")) {
      if (v.size() != 3) throw MeshParseError(0, "vertex needs three coordinates");
      mesh.vertices.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    const int n = static_cast<int>(mesh.vertices.size());
    for (const auto& t : j.at("triangles")) {
      if (t.size() != 3) throw MeshParseError(0, "triangle needs three indices");
      std::array<int, 3> tri{t[0].get<int>(), t[1].get<int>(), t[2].get<int>()};
      for (int i : tri) {
        if (i < 0 || i >= n) throw MeshParseError(0, "triangle index out of range");
      }
      mesh.triangles.push_back(tri);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MeshParseError(0, e.what());
  }
  return mesh;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

TriangleMesh load_mesh(std::istream& in, MeshFormat format, const MeshLoadOptions& options) {
  TriangleMesh mesh = format == MeshFormat::obj ? load_obj(in, options) : load_json(in);
  drop_degenerate(mesh, options.min_triangle_area);
  return mesh;
}

TriangleMesh load_mesh_file(const std::string& path, const MeshLoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path);
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "obj" || ext == "OBJ") return load_mesh(in, MeshFormat::obj, options);
  if (ext == "json") return load_mesh(in, MeshFormat::json, options);
  throw std::runtime_error("unknown mesh format for " + path);
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

std::vector<TriangleMesh> segment_buildings(const TriangleMesh& mesh, double weld_tol) {
  const std::size_t n = mesh.vertices.size();
  UnionFind uf(n);

  // Weld: hash on a grid of cell size weld_tol and check the 27 neighbouring cells.
  using Key = std::tuple<long long, long long, long long>;
  std::map<Key, std::vector<int>> cells;
  auto key_of = [&](const Eigen::Vector3d& p) {
    return Key{static_cast<long long>(std::floor(p.x() / weld_tol)), static_cast<long long>(std::floor(p.y() / weld_tol)),
               static_cast<long long>(std::floor(p.z() / weld_tol))};
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = mesh.vertices[i];
    const auto [kx, ky, kz] = key_of(p);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = cells.find(Key{kx + dx, ky + dy, kz + dz});
          if (it == cells.end()) continue;
          for (int j : it->second) {
            if ((mesh.vertices[static_cast<std::size_t>(j)] - p).norm() <= weld_tol) uf.unite(static_cast<int>(i), j);
          }
        }
      }
    }
    cells[key_of(p)].push_back(static_cast<int>(i));
  }
  for (const auto& t : mesh.triangles) {
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
  }

  std::vector<TriangleMesh> out;
  std::unordered_map<int, std::size_t> component_of_root;
  std::vector<std::unordered_map<int, int>> remap;
  for (const auto& t : mesh.triangles) {
    const int root = uf.find(t[0]);
    auto [it, inserted] = component_of_root.try_emplace(root, out.size());
    if (inserted) {
      out.emplace_back();
      remap.emplace_back();
    }
    auto& comp = out[it->second];
    auto& map = remap[it->second];
    std::array<int, 3> local{};
    for (int k = 0; k < 3; ++k) {
      auto [mit, fresh] = map.try_emplace(t[static_cast<std::size_t>(k)], static_cast<int>(comp.vertices.size()));
      if (fresh) comp.vertices.push_back(mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])]);
      local[static_cast<std::size_t>(k)] = mit->second;
    }
    comp.triangles.push_back(local);
  }
  return out;
}

TriangleMesh box_mesh(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z());
  }
  // Quads listed counterclockwise seen from outside.
  const int quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (const auto& q : quads) {
    m.triangles.push_back({q[0], q[1], q[2]});
    m.triangles.push_back({q[0], q[2], q[3]});
  }
  return m;
}

TriangleMesh merge_meshes(const std::vector<TriangleMesh>& parts) {
  TriangleMesh out;
  for (const auto& p : parts) {
    const int offset = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), p.vertices.begin(), p.vertices.end());
    for (const auto& t : p.triangles) out.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
  }
  return out;
}

}  // namespace zsm
