// Discretization error measures evaluated from a solved DoF vector.

#ifndef VEMCIP_ERRORS_HPP
#define VEMCIP_ERRORS_HPP

#include "vemcip/assembly.hpp"
#include "vemcip/manufactured.hpp"

namespace vemcip {

/// Per-term breakdown of the mesh-dependent error norm: diffusion,
/// h-weighted streamline derivative, reaction, boundary penalty, inflow
/// penalty and jump stabilization.
struct CipErrorBreakdown {
  double diffusion = 0.0;
  double streamline = 0.0;
  double reaction = 0.0;
  double boundary_projection = 0.0;
  double inflow = 0.0;
  double jump = 0.0;

  double total_squared() const {
    return diffusion + streamline + reaction + boundary_projection + inflow + jump;
  }
};

struct ErrorReport {
  double e_h1 = 0.0;
  double e_l2 = 0.0;
  double e_cip = 0.0;
  CipErrorBreakdown cip_terms;
  double h = 0.0;
  int n_dofs = 0;
  double seconds = 0.0;
};

/// Broken H^1 distance of the H^1-projected discrete solution to u:
/// sqrt(sum_E |grad(u - pi_nabla u_h)|^2_{0,E}).
double error_h1(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                const GlobalDofMap& dof_map, const Eigen::VectorXd& dofs,
                const ManufacturedProblem& problem);

/// sqrt(sum_E |u - pi_0 u_h|^2_{0,E}).
double error_l2(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                const GlobalDofMap& dof_map, const Eigen::VectorXd& dofs,
                const ManufacturedProblem& problem);

/// Error in the stabilized mesh-dependent norm. In the two main-part terms u
/// enters by exact evaluation at quadrature points against the projected
/// discrete polynomials; the jump and boundary-projection terms replace u by
/// its DoF interpolant.
CipErrorBreakdown error_cip(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                            const GlobalDofMap& dof_map, const Eigen::VectorXd& dofs,
                            const ManufacturedProblem& problem, const ModelParams& params);

} // namespace vemcip

#endif
