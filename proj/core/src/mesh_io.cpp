#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "vemcip/mesh.hpp"

namespace vemcip {

namespace {

// 17 significant digits round-trip any IEEE double exactly.
void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

} // namespace

void save_mesh(const PolyMesh& mesh, const std::string& path) {
  // Written to a temporary and renamed so readers never observe a torn file.
  const std::string tmp = path + ".tmp";
  std::ofstream os(tmp);
  if (!os) throw MeshError("save_mesh: cannot open '" + tmp + "' for writing");
  os << "{\n  \"vertices\": [\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    os << "    [";
    write_double(os, mesh.vertices[i].x());
    os << ", ";
    write_double(os, mesh.vertices[i].y());
    os << (i + 1 < mesh.vertices.size() ? "],\n" : "]\n");
  }
  os << "  ],\n  \"cells\": [\n";
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    os << "    [";
    for (std::size_t j = 0; j < mesh.cells[c].size(); ++j)
      os << mesh.cells[c][j] << (j + 1 < mesh.cells[c].size() ? ", " : "");
    os << (c + 1 < mesh.cells.size() ? "],\n" : "]\n");
  }
  os << "  ]\n}\n";
  os.close();
  if (!os) throw MeshError("save_mesh: write to '" + tmp + "' failed");
  std::filesystem::rename(tmp, path);
}

PolyMesh load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MeshError("load_mesh: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw MeshError("load_mesh: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("cells"))
    throw MeshError("load_mesh: '" + path + "' must be an object with 'vertices' and 'cells'");

  std::vector<Vec2> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw MeshError("load_mesh: vertex " + std::to_string(vertices.size()) +
                      " is not a pair of numbers");
    vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  std::vector<std::vector<int>> cells;
  for (const auto& c : doc["cells"]) {
    if (!c.is_array()) throw MeshError("load_mesh: cell " + std::to_string(cells.size()) + " is not an array");
    std::vector<int> cell;
    for (const auto& v : c) {
      if (!v.is_number_integer())
        throw MeshError("load_mesh: cell " + std::to_string(cells.size()) + " has a non-integer entry");
      cell.push_back(v.get<int>());
    }
    cells.push_back(std::move(cell));
  }
  // Index-range and orientation checks live in build_topology.
  return build_topology(std::move(vertices), std::move(cells));
}

} // namespace vemcip
