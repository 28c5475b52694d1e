// Local matrices of the stabilized scheme.
//
// Element contributions (N_E x N_E, trial = column, test = row):
//   A_E   diffusion: grad-projection consistency + dofi-dofi stabilization
//         of the H^1-projection remainder; symmetric PSD, kernel = constants,
//   B_E   advection (beta . grad pi0_k u, pi0_k v),
//   C_E   reaction: L^2 consistency + |E|-scaled dofi-dofi stabilization of
//         the L^2-projection remainder; SPD,
//   JS_E  volume part of the jump stabilization,
//   N_E   symmetric Nitsche boundary terms with inflow upwind penalty.
//
// Facet-pair contributions on interior facets couple the stacked DoFs
// (owner first, then neighbor):
//   D_e   advective consistency correction, assembled once per facet with
//         total weight -1,
//   J_e   gradient-jump penalty, symmetric PSD, assembled once per facet
//         with weight gamma_e.

#ifndef VEMCIP_LOCAL_FORMS_HPP
#define VEMCIP_LOCAL_FORMS_HPP

#include "vemcip/local_space.hpp"
#include "vemcip/model.hpp"

namespace vemcip {

Eigen::MatrixXd local_diffusion(const LocalSpace& ls);

Eigen::MatrixXd local_advection(const LocalSpace& ls, const VectorField& beta);

Eigen::MatrixXd local_reaction(const LocalSpace& ls);

/// gamma_E * h_E * dofi-dofi on the L^2-projection remainder.
Eigen::MatrixXd element_jump(const LocalSpace& ls, double gamma_E);

/// kappa_E * max |beta| over the facet quadrature points of the cell boundary.
double gamma_element(const PolyMesh& mesh, const LocalSpace& ls, const VectorField& beta,
                     double kappa_E, int quad_exactness);
/// kappa_e * max |beta| over the quadrature points of one facet.
double gamma_facet(const PolyMesh& mesh, int facet, const VectorField& beta, double kappa_e,
                   int quad_exactness);

/// Paired advective correction; `facet` must be interior, `owner_space` and
/// `neighbor_space` the spaces of its two incident cells.
Eigen::MatrixXd facet_dh(const PolyMesh& mesh, int facet, const LocalSpace& owner_space,
                         const LocalSpace& neighbor_space, const VectorField& beta);

/// Paired gradient-jump penalty with weight gamma_e.
Eigen::MatrixXd facet_jump(const PolyMesh& mesh, int facet, const LocalSpace& owner_space,
                           const LocalSpace& neighbor_space, double gamma_e);

/// Nitsche matrix of a boundary cell (zero when the cell has no boundary
/// facet; throws if asked to treat an interior cell as boundary).
Eigen::MatrixXd nitsche_matrix(const PolyMesh& mesh, const LocalSpace& ls, const ModelParams& params);

/// Load vector: volume f-term plus the Nitsche data terms on boundary facets.
Eigen::VectorXd local_load(const PolyMesh& mesh, const LocalSpace& ls, const ModelParams& params,
                           const ScalarField& f, const ScalarField& g);

} // namespace vemcip

#endif
