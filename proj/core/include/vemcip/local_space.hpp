// Per-element nonconforming virtual space of order k.
//
// Degrees of freedom: for each facet e of the cell, the k scaled moments
//   mu^l_{E,e}(v) = (1/h_e) \int_e v ((s - s_e)/h_e)^l ds,   l = 0..k-1,
// taken in the facet's intrinsic arc-length orientation (shared by both
// incident cells), followed by the interior scaled moments
//   mu^a_E(v) = (1/|E|) \int_E v m_a dE,   |a| <= k-2,
// in graded-lex order. Local DoF count: k n_E + k(k-1)/2.
//
// From the DoFs the class realizes the three computable projectors
//   - pi_nabla: H^1-seminorm projection onto P_k, kernel fixed by the
//     boundary mean value,
//   - pi_0: L^2 projection onto P_k through the enhancement constraint
//     (moments of degree k-1 and k taken from pi_nabla),
//   - pi_0_grad: componentwise L^2 projection of the gradient onto P_{k-1},
// plus per-facet L^2(e) projections onto P_{k-1}(e).

#ifndef VEMCIP_LOCAL_SPACE_HPP
#define VEMCIP_LOCAL_SPACE_HPP

#include <functional>

#include "vemcip/dof_map.hpp"
#include "vemcip/monomials.hpp"

namespace vemcip {

struct DofLayout {
  int k = 1;
  int n_facets = 0;
  int facet_dofs = 0;    ///< k per facet
  int interior_dofs = 0; ///< dim P_{k-2} = k(k-1)/2
  int total = 0;

  DofLayout() = default;
  DofLayout(int order, int facets)
      : k(order), n_facets(facets), facet_dofs(order * facets),
        interior_dofs(order * (order - 1) / 2), total(facet_dofs + interior_dofs) {}

  int facet_dof(int local_facet, int moment) const { return local_facet * k + moment; }
  int interior_dof(int alpha_index) const { return facet_dofs + alpha_index; }
};

class LocalSpace {
public:
  /// Build projectors and edge-projection maps for one cell. The cell
  /// quadrature rule is kept for form assembly (default exactness 2k+2).
  LocalSpace(const PolyMesh& mesh, int cell, int k, int quad_exactness = -1);

  int k() const { return k_; }
  int cell() const { return cell_; }
  const DofLayout& layout() const { return layout_; }
  int num_dofs() const { return layout_.total; }

  double area() const { return area_; }
  double diameter() const { return diameter_; }
  const Vec2& centroid() const { return centroid_; }
  const std::vector<int>& facet_ids() const { return facet_ids_; }

  const ScaledMonomialBasis2D& basis() const { return basis_; }        ///< degree k
  const ScaledMonomialBasis2D& basis_grad() const { return basis_grad_; } ///< degree k-1
  const QuadratureRule& cell_quadrature() const { return cell_quad_; }

  /// DoF matrix D, (N_E x dim P_k): D(i,a) = dof_i(m_a).
  const Eigen::MatrixXd& dof_matrix() const { return dof_matrix_; }
  /// Monomial mass matrix of degree k.
  const Eigen::MatrixXd& mass_matrix() const { return mass_; }
  /// Top-left block of the mass matrix, degree k-1.
  Eigen::MatrixXd mass_matrix_grad() const;

  /// DoFs -> monomial coefficients of the H^1 projection (dim P_k x N_E).
  const Eigen::MatrixXd& pi_nabla() const { return pi_nabla_; }
  /// DoFs -> monomial coefficients of the L^2 projection (dim P_k x N_E).
  const Eigen::MatrixXd& pi_0() const { return pi_0_; }
  /// DoFs -> coefficients of the gradient components in P_{k-1}.
  const Eigen::MatrixXd& pi_0_grad_x() const { return pi_0_grad_x_; }
  const Eigen::MatrixXd& pi_0_grad_y() const { return pi_0_grad_y_; }

  /// DoFs -> 1D scaled-monomial coefficients of the L^2(e) projection onto
  /// P_{k-1}(e) for the j-th facet of the cell loop (k x N_E).
  const Eigen::MatrixXd& edge_projection(int local_facet) const { return edge_proj_[local_facet]; }

  /// DoF-space projectors D * pi (N_E x N_E).
  Eigen::MatrixXd dof_projector_nabla() const { return dof_matrix_ * pi_nabla_; }
  Eigen::MatrixXd dof_projector_0() const { return dof_matrix_ * pi_0_; }

  /// Local DoF vector of a smooth function, every moment by quadrature.
  Eigen::VectorXd dofs_of(const std::function<double(const Vec2&)>& f) const;
  /// Local DoF vector of the polynomial with the given coefficients.
  Eigen::VectorXd dofs_of_polynomial(const Eigen::VectorXd& coeffs) const;

private:
  void compute_pi_nabla(const PolyMesh& mesh);
  void compute_pi_0();
  void compute_pi_0_grad(const PolyMesh& mesh);
  void compute_edge_projections(const PolyMesh& mesh);
  void compute_dof_matrix(const PolyMesh& mesh);

  int cell_;
  int k_;
  DofLayout layout_;
  double area_, diameter_;
  Vec2 centroid_;
  std::vector<int> facet_ids_;
  std::vector<double> facet_lengths_;
  std::vector<Vec2> facet_normals_; ///< outward from this cell
  std::vector<QuadratureRule> facet_quads_;
  ScaledMonomialBasis2D basis_;
  ScaledMonomialBasis2D basis_grad_;
  QuadratureRule cell_quad_;
  Eigen::MatrixXd mass_;
  Eigen::MatrixXd dof_matrix_;
  Eigen::MatrixXd pi_nabla_, pi_0_, pi_0_grad_x_, pi_0_grad_y_;
  std::vector<Eigen::MatrixXd> edge_proj_;
};

/// Local spaces for every cell, in cell order.
std::vector<LocalSpace> build_local_spaces(const PolyMesh& mesh, int k, int threads = 1);

/// Global DoF interpolant of a smooth function: every global DoF is the
/// corresponding moment, interior-facet moments computed once per facet.
Eigen::VectorXd interpolate(const std::function<double(const Vec2&)>& f, const PolyMesh& mesh,
                            const std::vector<LocalSpace>& spaces, const GlobalDofMap& dofs);

/// Oswald interpolant of a discontinuous piecewise polynomial given by
/// per-cell coefficient vectors (degree k, each cell's scaled basis): facet
/// moments are averaged across interior facets, one-sided on the boundary,
/// interior moments are the cell's own.
Eigen::VectorXd oswald_interpolant(const std::vector<Eigen::VectorXd>& cell_coeffs,
                                   const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                                   const GlobalDofMap& dofs);

} // namespace vemcip

#endif
