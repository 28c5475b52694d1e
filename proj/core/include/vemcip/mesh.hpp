// Polygonal mesh on the unit square: storage, topology, generators, quality
// diagnostics and JSON I/O.
//
// A finished PolyMesh is immutable by convention and safe to share across
// threads for read-only access.

#ifndef VEMCIP_MESH_HPP
#define VEMCIP_MESH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vemcip/geometry.hpp"

namespace vemcip {

/// Raised on malformed topology or invalid mesh files.
class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// One straight mesh facet (edge). Endpoints are stored in a fixed order that
/// defines the intrinsic arc-length parametrization shared by both incident
/// cells; the normal is the unit outward normal of the owner cell.
struct FacetRecord {
  int v0 = -1;
  int v1 = -1;
  int owner = -1;
  int neighbor = -1; ///< -1 marks a boundary facet
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
  Vec2 midpoint = Vec2::Zero();

  bool is_boundary() const { return neighbor < 0; }
};

struct PolyMesh {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells; ///< counterclockwise vertex loops
  std::vector<FacetRecord> facets;
  std::vector<std::vector<int>> cell_facets; ///< cell_facets[c][j]: facet of edge (cells[c][j], cells[c][j+1])

  std::vector<double> cell_area;
  std::vector<double> cell_diameter;
  std::vector<Vec2> cell_centroid;
  double h = 0.0; ///< max element diameter

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }
  int num_boundary_facets() const;

  std::vector<Vec2> cell_loop(int c) const;

  /// Outward unit normal of facet `f` as seen from cell `c` (owner or neighbor).
  Vec2 outward_normal(int f, int c) const;
};

/// Per-mesh shape-regularity diagnostics for the star-shapedness/facet-size
/// assumption. Report only; nothing is enforced.
struct QualityReport {
  double min_facet_to_diameter = 1.0;  ///< min over cells of min_e h_e / h_E
  double min_inradius_to_diameter = 1.0; ///< inscribed-ball radius estimate over h_E
  double min_diameter_to_h = 1.0;      ///< min h_E / h
  std::vector<int> violations;         ///< cells with a ratio below the threshold, or not star-shaped from centroid
};

/// Resolve facet adjacency from vertex loops: owner/neighbor matching by
/// unordered endpoint pairs, outward normals, boundary flags and cell caches.
/// Throws MeshError on facets shared by more than two cells or on collinear
/// boundary-facet overlaps (T-junctions).
PolyMesh build_topology(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

/// Octagonal family: n x n grid, two triangles per square, hypotenuses split
/// at midpoints, nodes perturbed by at most perturb/n (boundary nodes only
/// tangentially, corners fixed), then one midpoint inserted on every edge.
/// 2 n^2 cells of 8 vertices each. Deterministic for a fixed seed.
PolyMesh generate_octag(int n, double perturb, std::uint64_t seed);

/// Clipped Voronoi diagram of the given seed points in [0,1]^2, optionally
/// smoothed by Lloyd centroid iterations.
PolyMesh voronoi_from_seeds(std::vector<Vec2> seeds, int lloyd_iters);

/// Voronoi family: n_cells uniform random seeds, Lloyd smoothing, clipped by
/// the unit square. Duplicate seeds are jittered and retried.
PolyMesh generate_voronoi(int n_cells, int lloyd_iters, std::uint64_t seed);

QualityReport quality_report(const PolyMesh& mesh, double rho);

/// JSON layout: {"vertices": [[x,y],...], "cells": [[i0,i1,...],...]},
/// 0-based indices, 17 significant digits.
void save_mesh(const PolyMesh& mesh, const std::string& path);
PolyMesh load_mesh(const std::string& path);

} // namespace vemcip

#endif
