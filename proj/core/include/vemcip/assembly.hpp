// Sparse assembly of the global stabilized system and its direct solution.

#ifndef VEMCIP_ASSEMBLY_HPP
#define VEMCIP_ASSEMBLY_HPP

#include <Eigen/Sparse>

#include "vemcip/local_forms.hpp"

namespace vemcip {

struct GlobalSystem {
  Eigen::SparseMatrix<double> matrix; ///< row-compressed, nonsymmetric
  Eigen::VectorXd rhs;
  GlobalDofMap dof_map;
};

/// Scatter eps*A_E + B_E + sigma*C_E + JS_E (+ Nitsche on boundary cells)
/// per cell, D_e and J_e per interior facet (owner block first), and
/// accumulate the load. Deterministic for a fixed mesh regardless of the
/// thread count used for the local computations.
GlobalSystem assemble(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                      const GlobalDofMap& dof_map, const ModelParams& params,
                      const ScalarField& f, const ScalarField& g, int threads = 1);

class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Sparse LU solve; throws SolverError on singular factorization or when the
/// relative residual exceeds 1e-10.
Eigen::VectorXd solve(const GlobalSystem& system);

/// MatrixMarket coordinate dump for external inspection.
void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path);

} // namespace vemcip

#endif
