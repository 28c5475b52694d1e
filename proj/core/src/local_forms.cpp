#include "vemcip/local_forms.hpp"

#include "vemcip/quadrature.hpp"

namespace vemcip {

namespace {

Eigen::VectorXd weights_of(const QuadratureRule& quad) {
  return Eigen::Map<const Eigen::VectorXd>(quad.weights.data(), quad.size());
}

// dofi-dofi stabilization of a projection remainder: (I - D P)^T (I - D P).
Eigen::MatrixXd remainder_gram(const LocalSpace& ls, const Eigen::MatrixXd& pi) {
  const Eigen::MatrixXd R =
      Eigen::MatrixXd::Identity(ls.num_dofs(), ls.num_dofs()) - ls.dof_matrix() * pi;
  return R.transpose() * R;
}

} // namespace

Eigen::MatrixXd local_diffusion(const LocalSpace& ls) {
  // Consistency through the projected gradient, then stabilization of the
  // H^1-projection remainder. Symmetrized so roundoff cannot leak into the
  // skew part.
  const Eigen::MatrixXd mass_grad = ls.mass_matrix_grad();
  const Eigen::MatrixXd A = ls.pi_0_grad_x().transpose() * mass_grad * ls.pi_0_grad_x() +
                            ls.pi_0_grad_y().transpose() * mass_grad * ls.pi_0_grad_y() +
                            remainder_gram(ls, ls.pi_nabla());
  return 0.5 * (A + A.transpose());
}

Eigen::MatrixXd local_advection(const LocalSpace& ls, const VectorField& beta) {
  const QuadratureRule& quad = ls.cell_quadrature();
  const Eigen::MatrixXd mvals = ls.basis().eval(quad.points);
  Eigen::MatrixXd gx, gy;
  ls.basis().eval_gradients(quad.points, gx, gy);
  // W(g,d) = \int_E (beta . grad m_d) m_g.
  const int nk = ls.basis().size();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(nk, nk);
  for (int q = 0; q < quad.size(); ++q) {
    const Vec2 b = beta(quad.points[q]);
    W.noalias() += quad.weights[q] * mvals.row(q).transpose() *
                   (b.x() * gx.row(q) + b.y() * gy.row(q));
  }
  return ls.pi_0().transpose() * W * ls.pi_0();
}

Eigen::MatrixXd local_reaction(const LocalSpace& ls) {
  const Eigen::MatrixXd C = ls.pi_0().transpose() * ls.mass_matrix() * ls.pi_0() +
                            ls.area() * remainder_gram(ls, ls.pi_0());
  return 0.5 * (C + C.transpose());
}

Eigen::MatrixXd element_jump(const LocalSpace& ls, double gamma_E) {
  const Eigen::MatrixXd J = gamma_E * ls.diameter() * remainder_gram(ls, ls.pi_0());
  return 0.5 * (J + J.transpose());
}

double gamma_element(const PolyMesh& mesh, const LocalSpace& ls, const VectorField& beta,
                     double kappa_E, int quad_exactness) {
  double bmax = 0.0;
  for (int f : ls.facet_ids()) {
    const QuadratureRule quad = facet_quadrature(mesh.facets[f], mesh, quad_exactness);
    for (const auto& p : quad.points) bmax = std::max(bmax, beta(p).norm());
  }
  return kappa_E * bmax;
}

double gamma_facet(const PolyMesh& mesh, int facet, const VectorField& beta, double kappa_e,
                   int quad_exactness) {
  const QuadratureRule quad = facet_quadrature(mesh.facets[facet], mesh, quad_exactness);
  double bmax = 0.0;
  for (const auto& p : quad.points) bmax = std::max(bmax, beta(p).norm());
  return kappa_e * bmax;
}

namespace {

// Values of pi_0 of every local shape function at the given points (rows =
// points, cols = local DoFs).
Eigen::MatrixXd projected_values(const LocalSpace& ls, const std::vector<Vec2>& points) {
  return ls.basis().eval(points) * ls.pi_0();
}

// Normal component of grad(pi_0 .) at the given points.
Eigen::MatrixXd projected_normal_gradients(const LocalSpace& ls, const std::vector<Vec2>& points,
                                           const Vec2& n) {
  Eigen::MatrixXd gx, gy;
  ls.basis().eval_gradients(points, gx, gy);
  return (n.x() * gx + n.y() * gy) * ls.pi_0();
}

} // namespace

Eigen::MatrixXd facet_dh(const PolyMesh& mesh, int facet, const LocalSpace& owner_space,
                         const LocalSpace& neighbor_space, const VectorField& beta) {
  const FacetRecord& rec = mesh.facets[facet];
  if (rec.is_boundary()) throw std::invalid_argument("facet_dh: facet is on the boundary");
  const QuadratureRule quad =
      facet_quadrature(rec, mesh, owner_space.cell_quadrature().exactness);

  const Eigen::MatrixXd vo = projected_values(owner_space, quad.points);
  const Eigen::MatrixXd vn = projected_values(neighbor_space, quad.points);
  const int no = owner_space.num_dofs(), nn = neighbor_space.num_dofs();

  // Stacked rows [owner | neighbor]: jump of the trial value against the
  // average of the test value, with beta . n in the owner orientation. The
  // product is orientation-invariant, so assembling once per facet with
  // total weight -1 matches the two half-weight element contributions.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(no + nn, no + nn);
  Eigen::RowVectorXd jump(no + nn), avg(no + nn);
  for (int q = 0; q < quad.size(); ++q) {
    const double bn = beta(quad.points[q]).dot(rec.normal);
    jump << vo.row(q), -vn.row(q);
    avg << 0.5 * vo.row(q), 0.5 * vn.row(q);
    D.noalias() -= (quad.weights[q] * bn) * avg.transpose() * jump;
  }
  return D;
}

Eigen::MatrixXd facet_jump(const PolyMesh& mesh, int facet, const LocalSpace& owner_space,
                           const LocalSpace& neighbor_space, double gamma_e) {
  const FacetRecord& rec = mesh.facets[facet];
  if (rec.is_boundary()) throw std::invalid_argument("facet_jump: facet is on the boundary");
  const QuadratureRule quad =
      facet_quadrature(rec, mesh, owner_space.cell_quadrature().exactness);

  const Eigen::MatrixXd go = projected_normal_gradients(owner_space, quad.points, rec.normal);
  const Eigen::MatrixXd gn = projected_normal_gradients(neighbor_space, quad.points, rec.normal);
  const int no = owner_space.num_dofs(), nn = neighbor_space.num_dofs();

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(no + nn, no + nn);
  Eigen::RowVectorXd jump(no + nn);
  const double scale = gamma_e * rec.length * rec.length;
  for (int q = 0; q < quad.size(); ++q) {
    jump << go.row(q), -gn.row(q);
    J.noalias() += (scale * quad.weights[q]) * jump.transpose() * jump;
  }
  return J;
}

Eigen::MatrixXd nitsche_matrix(const PolyMesh& mesh, const LocalSpace& ls, const ModelParams& params) {
  const int n = ls.num_dofs();
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
  ScaledMonomialBasis1D basis1d(ls.k());
  const auto& facets = ls.facet_ids();
  for (std::size_t e = 0; e < facets.size(); ++e) {
    const FacetRecord& rec = mesh.facets[facets[e]];
    if (!rec.is_boundary()) continue;
    const QuadratureRule quad = facet_quadrature(rec, mesh, params.quad_exactness());
    const Eigen::VectorXd w = weights_of(quad);

    // The consistency flux pi0_{k-1} grad(.) . n lies in P_{k-1}(e), so
    // pairing it with the edge projection of the other argument is exact.
    const Eigen::MatrixXd mg = ls.basis_grad().eval(quad.points); // q x dim P_{k-1}
    const Eigen::MatrixXd flux =
        rec.normal.x() * (mg * ls.pi_0_grad_x()) + rec.normal.y() * (mg * ls.pi_0_grad_y());
    const Eigen::MatrixXd traces =
        basis1d.eval(quad.param) * ls.edge_projection(static_cast<int>(e)); // q x n

    const Eigen::MatrixXd consistency = traces.transpose() * w.asDiagonal() * flux;
    N.noalias() -= params.eps * (consistency + consistency.transpose());
    N.noalias() +=
        params.eps / (params.delta * ls.diameter()) * traces.transpose() * w.asDiagonal() * traces;

    // Upwind penalty on the inflow part, decided per quadrature point.
    const Eigen::MatrixXd pvals = projected_values(ls, quad.points);
    Eigen::VectorXd inflow(quad.size());
    for (int q = 0; q < quad.size(); ++q)
      inflow[q] = std::max(0.0, -params.beta(quad.points[q]).dot(rec.normal));
    N.noalias() += pvals.transpose() * (w.cwiseProduct(inflow)).asDiagonal() * pvals;
  }
  return N;
}

Eigen::VectorXd local_load(const PolyMesh& mesh, const LocalSpace& ls, const ModelParams& params,
                           const ScalarField& f, const ScalarField& g) {
  const QuadratureRule& cell_quad = ls.cell_quadrature();
  const Eigen::MatrixXd mvals = ls.basis().eval(cell_quad.points);
  Eigen::VectorXd fm = Eigen::VectorXd::Zero(ls.basis().size());
  for (int q = 0; q < cell_quad.size(); ++q)
    fm.noalias() += cell_quad.weights[q] * f(cell_quad.points[q]) * mvals.row(q).transpose();
  Eigen::VectorXd load = ls.pi_0().transpose() * fm;

  ScaledMonomialBasis1D basis1d(ls.k());
  const auto& facets = ls.facet_ids();
  for (std::size_t e = 0; e < facets.size(); ++e) {
    const FacetRecord& rec = mesh.facets[facets[e]];
    if (!rec.is_boundary()) continue;
    const QuadratureRule quad = facet_quadrature(rec, mesh, params.quad_exactness());

    const Eigen::MatrixXd mg = ls.basis_grad().eval(quad.points);
    const Eigen::MatrixXd flux =
        rec.normal.x() * (mg * ls.pi_0_grad_x()) + rec.normal.y() * (mg * ls.pi_0_grad_y());
    const Eigen::MatrixXd traces = basis1d.eval(quad.param) * ls.edge_projection(static_cast<int>(e));
    const Eigen::MatrixXd pvals = projected_values(ls, quad.points);

    for (int q = 0; q < quad.size(); ++q) {
      const double gq = g(quad.points[q]);
      const double wq = quad.weights[q];
      load.noalias() -= params.eps * wq * gq * flux.row(q).transpose();
      load.noalias() +=
          params.eps / (params.delta * ls.diameter()) * wq * gq * traces.row(q).transpose();
      const double inflow = std::max(0.0, -params.beta(quad.points[q]).dot(rec.normal));
      load.noalias() += wq * inflow * gq * pvals.row(q).transpose();
    }
  }
  return load;
}

} // namespace vemcip
