#include "vemcip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace vemcip {

int PolyMesh::num_boundary_facets() const {
  int count = 0;
  for (const auto& f : facets) count += f.is_boundary() ? 1 : 0;
  return count;
}

std::vector<Vec2> PolyMesh::cell_loop(int c) const {
  std::vector<Vec2> loop;
  loop.reserve(cells[c].size());
  for (int v : cells[c]) loop.push_back(vertices[v]);
  return loop;
}

Vec2 PolyMesh::outward_normal(int f, int c) const {
  const FacetRecord& facet = facets[f];
  if (c == facet.owner) return facet.normal;
  if (c == facet.neighbor) return -facet.normal;
  throw MeshError("outward_normal: cell " + std::to_string(c) + " is not incident to facet " +
                  std::to_string(f));
}

PolyMesh build_topology(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells) {
  PolyMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nc = mesh.num_cells();

  // Validate loops and orientation before touching adjacency.
  for (int c = 0; c < nc; ++c) {
    const auto& cell = mesh.cells[c];
    if (cell.size() < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (int v : cell)
      if (v < 0 || v >= nv)
        throw MeshError("cell " + std::to_string(c) + " references vertex " + std::to_string(v) +
                        " out of range [0," + std::to_string(nv) + ")");
    for (std::size_t i = 0; i < cell.size(); ++i)
      for (std::size_t j = i + 1; j < cell.size(); ++j)
        if (cell[i] == cell[j])
          throw MeshError("cell " + std::to_string(c) + " repeats vertex " + std::to_string(cell[i]));
    const auto loop = mesh.cell_loop(c);
    if (polygon_signed_area(loop) <= 0.0)
      throw MeshError("cell " + std::to_string(c) + " is not counterclockwise or is degenerate");
    if (!polygon_is_simple(loop))
      throw MeshError("cell " + std::to_string(c) + " is not a simple polygon");
  }

  // Match facets by unordered endpoint pair. First incident cell becomes the
  // owner and fixes the stored endpoint order.
  std::map<std::pair<int, int>, int> facet_of;
  mesh.cell_facets.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& cell = mesh.cells[c];
    const int ne = static_cast<int>(cell.size());
    mesh.cell_facets[c].resize(ne);
    for (int e = 0; e < ne; ++e) {
      const int a = cell[e], b = cell[(e + 1) % ne];
      const auto key = std::minmax(a, b);
      auto it = facet_of.find(key);
      if (it == facet_of.end()) {
        FacetRecord f;
        f.v0 = a;
        f.v1 = b;
        f.owner = c;
        const Vec2 tangent = mesh.vertices[b] - mesh.vertices[a];
        f.length = tangent.norm();
        if (f.length == 0.0) throw MeshError("zero-length facet in cell " + std::to_string(c));
        // Owner traverses v0 -> v1 counterclockwise, so the outward normal is
        // the clockwise rotation of the tangent.
        f.normal = Vec2(tangent.y(), -tangent.x()) / f.length;
        f.midpoint = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
        const int id = mesh.num_facets();
        mesh.facets.push_back(f);
        facet_of.emplace(key, id);
        mesh.cell_facets[c][e] = id;
      } else {
        FacetRecord& f = mesh.facets[it->second];
        if (f.neighbor >= 0)
          throw MeshError("facet (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                          ") is shared by more than two cells");
        if (f.owner == c)
          throw MeshError("cell " + std::to_string(c) + " traverses facet (" +
                          std::to_string(key.first) + "," + std::to_string(key.second) + ") twice");
        f.neighbor = c;
        mesh.cell_facets[c][e] = it->second;
      }
    }
  }

  // Detect T-junctions: a boundary facet of one cell lying inside a longer
  // collinear boundary facet of another makes the mesh non-matching.
  std::vector<int> boundary;
  for (int f = 0; f < mesh.num_facets(); ++f)
    if (mesh.facets[f].is_boundary()) boundary.push_back(f);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const FacetRecord& fi = mesh.facets[boundary[i]];
    const Vec2 a = mesh.vertices[fi.v0], b = mesh.vertices[fi.v1];
    const Vec2 dir = (b - a) / fi.length;
    for (std::size_t j = i + 1; j < boundary.size(); ++j) {
      const FacetRecord& fj = mesh.facets[boundary[j]];
      const Vec2 c0 = mesh.vertices[fj.v0], c1 = mesh.vertices[fj.v1];
      const double tol = 1e-12 * std::max(fi.length, fj.length);
      if (std::abs(cross2(b - a, c0 - a)) > tol || std::abs(cross2(b - a, c1 - a)) > tol) continue;
      // Collinear: a T-junction iff the parameter intervals share positive
      // length. Facets that merely touch at a vertex overlap with length zero.
      const double t0 = dir.dot(c0 - a), t1 = dir.dot(c1 - a);
      const double lo = std::min(t0, t1), hi = std::max(t0, t1);
      if (std::min(hi, fi.length) - std::max(lo, 0.0) > tol)
        throw MeshError("boundary facets " + std::to_string(boundary[i]) + " and " +
                        std::to_string(boundary[j]) + " overlap (T-junction)");
    }
  }

  mesh.cell_area.resize(nc);
  mesh.cell_diameter.resize(nc);
  mesh.cell_centroid.resize(nc);
  mesh.h = 0.0;
  for (int c = 0; c < nc; ++c) {
    const auto loop = mesh.cell_loop(c);
    mesh.cell_area[c] = polygon_signed_area(loop);
    mesh.cell_diameter[c] = polygon_diameter(loop);
    mesh.cell_centroid[c] = polygon_centroid(loop);
    mesh.h = std::max(mesh.h, mesh.cell_diameter[c]);
  }
  return mesh;
}

QualityReport quality_report(const PolyMesh& mesh, double rho) {
  QualityReport report;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto loop = mesh.cell_loop(c);
    const double hE = mesh.cell_diameter[c];

    double min_edge = std::numeric_limits<double>::infinity();
    for (int f : mesh.cell_facets[c]) min_edge = std::min(min_edge, mesh.facets[f].length);
    const double facet_ratio = min_edge / hE;

    // Inscribed-ball radius about the centroid: valid (and a lower bound for
    // the largest inscribed ball) whenever the cell is star-shaped from it.
    const bool star = polygon_star_shaped_from(loop, mesh.cell_centroid[c]);
    const double inradius = star ? distance_to_boundary(loop, mesh.cell_centroid[c]) : 0.0;
    const double inradius_ratio = inradius / hE;

    const double size_ratio = hE / mesh.h;

    report.min_facet_to_diameter = std::min(report.min_facet_to_diameter, facet_ratio);
    report.min_inradius_to_diameter = std::min(report.min_inradius_to_diameter, inradius_ratio);
    report.min_diameter_to_h = std::min(report.min_diameter_to_h, size_ratio);
    if (!star || facet_ratio < rho || inradius_ratio < rho) report.violations.push_back(c);
  }
  return report;
}

} // namespace vemcip
