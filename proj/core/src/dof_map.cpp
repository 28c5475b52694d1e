#include "vemcip/dof_map.hpp"

namespace vemcip {

GlobalDofMap build_dof_map(const PolyMesh& mesh, int k) {
  if (k < 1) throw MeshError("build_dof_map: order k must be >= 1");
  GlobalDofMap map;
  map.k = k;
  map.interior_per_cell = k * (k - 1) / 2;
  map.n_facet_dofs = mesh.num_facets() * k;
  map.n_global = map.n_facet_dofs + mesh.num_cells() * map.interior_per_cell;

  map.cell_to_global.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    auto& local = map.cell_to_global[c];
    local.reserve(mesh.cell_facets[c].size() * k + map.interior_per_cell);
    for (int f : mesh.cell_facets[c])
      for (int l = 0; l < k; ++l) local.push_back(map.facet_dof(f, l));
    for (int a = 0; a < map.interior_per_cell; ++a) local.push_back(map.interior_dof(c, a));
  }
  return map;
}

} // namespace vemcip
