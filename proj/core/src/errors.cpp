#include "vemcip/errors.hpp"

#include <cmath>

#include "vemcip/local_forms.hpp"
#include "vemcip/quadrature.hpp"

namespace vemcip {

namespace {

Eigen::VectorXd local_dofs(const GlobalDofMap& dof_map, const Eigen::VectorXd& global, int cell) {
  const auto& ids = dof_map.cell_to_global[cell];
  Eigen::VectorXd out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = global[ids[i]];
  return out;
}

// Coefficients of the cell L^2 projection of an exact function, computed by
// quadrature: H^{-1} [ \int_E u m_a ].
Eigen::VectorXd project_exact(const LocalSpace& ls, const ScalarField& u) {
  const QuadratureRule& quad = ls.cell_quadrature();
  const Eigen::MatrixXd mvals = ls.basis().eval(quad.points);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ls.basis().size());
  for (int q = 0; q < quad.size(); ++q)
    rhs.noalias() += quad.weights[q] * u(quad.points[q]) * mvals.row(q).transpose();
  return ls.mass_matrix().ldlt().solve(rhs);
}

// 1D coefficients of the edge L^2 projection of an exact function onto
// P_{k-1}(e).
Eigen::VectorXd edge_project_exact(const QuadratureRule& quad, const Eigen::MatrixXd& bvals,
                                   const Eigen::MatrixXd& mass1d, const ScalarField& u) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(bvals.cols());
  for (int q = 0; q < quad.size(); ++q)
    rhs.noalias() += quad.weights[q] * u(quad.points[q]) * bvals.row(q).transpose();
  return mass1d.ldlt().solve(rhs);
}

} // namespace

double error_h1(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                const GlobalDofMap& dof_map, const Eigen::VectorXd& dofs,
                const ManufacturedProblem& problem) {
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalSpace& ls = spaces[c];
    const Eigen::VectorXd coeffs = ls.pi_nabla() * local_dofs(dof_map, dofs, c);
    const QuadratureRule& quad = ls.cell_quadrature();
    Eigen::MatrixXd gx, gy;
    ls.basis().eval_gradients(quad.points, gx, gy);
    for (int q = 0; q < quad.size(); ++q) {
      const Vec2 grad_h(gx.row(q).dot(coeffs), gy.row(q).dot(coeffs));
      total += quad.weights[q] * (problem.grad_u(quad.points[q]) - grad_h).squaredNorm();
    }
  }
  return std::sqrt(total);
}

double error_l2(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                const GlobalDofMap& dof_map, const Eigen::VectorXd& dofs,
                const ManufacturedProblem& problem) {
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalSpace& ls = spaces[c];
    const Eigen::VectorXd coeffs = ls.pi_0() * local_dofs(dof_map, dofs, c);
    const QuadratureRule& quad = ls.cell_quadrature();
    const Eigen::MatrixXd mvals = ls.basis().eval(quad.points);
    for (int q = 0; q < quad.size(); ++q) {
      const double diff = problem.u(quad.points[q]) - mvals.row(q).dot(coeffs);
      total += quad.weights[q] * diff * diff;
    }
  }
  return std::sqrt(total);
}

CipErrorBreakdown error_cip(const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                            const GlobalDofMap& dof_map, const Eigen::VectorXd& dofs,
                            const ManufacturedProblem& problem, const ModelParams& params) {
  CipErrorBreakdown out;
  const int k = dof_map.k;
  const double h = mesh.h;
  ScaledMonomialBasis1D basis1d(k);

  // The jump term is evaluated on u_I - u_h, u_I being the DoF interpolant of
  // the exact solution; all other terms use u directly.
  const Eigen::VectorXd u_I = interpolate(problem.u, mesh, spaces, dof_map);
  const Eigen::VectorXd diff_dofs = u_I - dofs;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalSpace& ls = spaces[c];
    const Eigen::VectorXd cell_dofs = local_dofs(dof_map, dofs, c);
    const Eigen::VectorXd nabla_coeffs = ls.pi_nabla() * cell_dofs;
    const Eigen::VectorXd p0_uh = ls.pi_0() * cell_dofs;
    // pi_0 applied to the difference u - u_h, using the exact-side projection.
    const Eigen::VectorXd p0_diff = project_exact(ls, problem.u) - p0_uh;
    const QuadratureRule& quad = ls.cell_quadrature();
    const Eigen::MatrixXd mvals = ls.basis().eval(quad.points);
    Eigen::MatrixXd gx, gy;
    ls.basis().eval_gradients(quad.points, gx, gy);

    for (int q = 0; q < quad.size(); ++q) {
      const Vec2& x = quad.points[q];
      const double w = quad.weights[q];
      const Vec2 grad_h(gx.row(q).dot(nabla_coeffs), gy.row(q).dot(nabla_coeffs));
      out.diffusion += params.eps * w * (problem.grad_u(x) - grad_h).squaredNorm();
      const Vec2 grad_diff(gx.row(q).dot(p0_diff), gy.row(q).dot(p0_diff));
      const double stream = problem.beta(x).dot(grad_diff);
      out.streamline += h * w * stream * stream;
      const double val = problem.u(x) - mvals.row(q).dot(p0_uh);
      out.reaction += params.sigma * w * val * val;
    }

    // Volume part of the jump term on u_I - u_h.
    const Eigen::VectorXd local_diff = local_dofs(dof_map, diff_dofs, c);
    const double gamma_E =
        gamma_element(mesh, ls, params.beta, params.kappa_E, params.quad_exactness());
    out.jump += local_diff.dot(element_jump(ls, gamma_E) * local_diff);

    // Boundary terms of the error norm, per boundary facet of this cell.
    const auto& layout = ls.layout();
    for (int e = 0; e < layout.n_facets; ++e) {
      const int fi = mesh.cell_facets[c][e];
      const FacetRecord& rec = mesh.facets[fi];
      if (!rec.is_boundary()) continue;
      const QuadratureRule fq = facet_quadrature(rec, mesh, params.quad_exactness());
      const Eigen::MatrixXd bvals = basis1d.eval(fq.param);
      const Eigen::MatrixXd mass1d = basis1d.mass_matrix(rec.length);

      // ||pi^{0,e}(u - u_h)||^2 with the global-h Nitsche weight.
      const Eigen::VectorXd edge_diff = edge_project_exact(fq, bvals, mass1d, problem.u) -
                                        ls.edge_projection(e) * cell_dofs;
      out.boundary_projection +=
          params.eps / (params.delta * h) * edge_diff.dot(mass1d * edge_diff);

      // Inflow penalty on pi_0(u - u_h), decided per quadrature point.
      const Eigen::MatrixXd fvals = ls.basis().eval(fq.points);
      for (int q = 0; q < fq.size(); ++q) {
        const double inflow = std::max(0.0, -params.beta(fq.points[q]).dot(rec.normal));
        if (inflow == 0.0) continue;
        const double val = fvals.row(q).dot(p0_diff);
        out.inflow += fq.weights[q] * inflow * val * val;
      }
    }
  }

  // Facet part of the jump term on u_I - u_h, once per interior facet.
  for (int fi = 0; fi < mesh.num_facets(); ++fi) {
    const FacetRecord& rec = mesh.facets[fi];
    if (rec.is_boundary()) continue;
    const double gamma_e =
        gamma_facet(mesh, fi, params.beta, params.kappa_e, params.quad_exactness());
    if (gamma_e == 0.0) continue;
    const Eigen::MatrixXd J = facet_jump(mesh, fi, spaces[rec.owner], spaces[rec.neighbor], gamma_e);
    Eigen::VectorXd stacked(spaces[rec.owner].num_dofs() + spaces[rec.neighbor].num_dofs());
    stacked << local_dofs(dof_map, diff_dofs, rec.owner), local_dofs(dof_map, diff_dofs, rec.neighbor);
    out.jump += stacked.dot(J * stacked);
  }
  return out;
}

} // namespace vemcip
