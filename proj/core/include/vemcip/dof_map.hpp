// Global DoF numbering: facet moments first (facet index major, moment
// minor), then interior moments (cell major, graded-lex minor). Facet DoFs
// are single-valued between the two incident cells.

#ifndef VEMCIP_DOF_MAP_HPP
#define VEMCIP_DOF_MAP_HPP

#include <vector>

#include "vemcip/mesh.hpp"

namespace vemcip {

struct GlobalDofMap {
  int k = 1;
  int n_global = 0;
  int n_facet_dofs = 0;
  int interior_per_cell = 0;
  std::vector<std::vector<int>> cell_to_global; ///< local DoF -> global index, per cell

  int facet_dof(int facet, int moment) const { return facet * k + moment; }
  int interior_dof(int cell, int alpha_index) const {
    return n_facet_dofs + cell * interior_per_cell + alpha_index;
  }
};

GlobalDofMap build_dof_map(const PolyMesh& mesh, int k);

} // namespace vemcip

#endif
