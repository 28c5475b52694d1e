#include "vemcip/local_space.hpp"

#include <atomic>
#include <numeric>
#include <optional>
#include <thread>

#include "vemcip/quadrature.hpp"

namespace vemcip {

LocalSpace::LocalSpace(const PolyMesh& mesh, int cell, int k, int quad_exactness)
    : cell_(cell), k_(k), layout_(k, static_cast<int>(mesh.cell_facets[cell].size())),
      area_(mesh.cell_area[cell]), diameter_(mesh.cell_diameter[cell]),
      centroid_(mesh.cell_centroid[cell]), facet_ids_(mesh.cell_facets[cell]),
      basis_(k, mesh.cell_centroid[cell], mesh.cell_diameter[cell]),
      basis_grad_(k - 1, mesh.cell_centroid[cell], mesh.cell_diameter[cell]) {
  if (k < 1) throw std::invalid_argument("LocalSpace: order k must be >= 1");
  const int exactness = quad_exactness > 0 ? quad_exactness : 2 * k + 2;

  cell_quad_ = polygon_quadrature(mesh, cell, exactness);
  mass_ = monomial_mass_matrix(basis_, cell_quad_);

  facet_lengths_.reserve(layout_.n_facets);
  facet_normals_.reserve(layout_.n_facets);
  facet_quads_.reserve(layout_.n_facets);
  for (int f : facet_ids_) {
    facet_lengths_.push_back(mesh.facets[f].length);
    facet_normals_.push_back(mesh.outward_normal(f, cell));
    // Stored endpoint order, not loop traversal order: the arc parameter must
    // agree between the two cells sharing the facet.
    facet_quads_.push_back(facet_quadrature(mesh.facets[f], mesh, exactness));
  }

  compute_dof_matrix(mesh);
  compute_edge_projections(mesh);
  compute_pi_nabla(mesh);
  compute_pi_0();
  compute_pi_0_grad(mesh);
}

Eigen::MatrixXd LocalSpace::mass_matrix_grad() const {
  const int n = poly_space_dim(k_ - 1);
  return mass_.topLeftCorner(n, n);
}

void LocalSpace::compute_dof_matrix(const PolyMesh&) {
  const int nk = basis_.size();
  dof_matrix_.setZero(layout_.total, nk);

  ScaledMonomialBasis1D basis1d(k_);
  for (int e = 0; e < layout_.n_facets; ++e) {
    const QuadratureRule& quad = facet_quads_[e];
    const Eigen::MatrixXd mvals = basis_.eval(quad.points);      // q x nk
    const Eigen::MatrixXd bvals = basis1d.eval(quad.param);      // q x k
    for (int l = 0; l < k_; ++l)
      for (int a = 0; a < nk; ++a) {
        double acc = 0.0;
        for (int q = 0; q < quad.size(); ++q) acc += quad.weights[q] * mvals(q, a) * bvals(q, l);
        dof_matrix_(layout_.facet_dof(e, l), a) = acc / facet_lengths_[e];
      }
  }
  // Interior moments against the P_{k-2} prefix of the same basis.
  for (int a = 0; a < layout_.interior_dofs; ++a)
    dof_matrix_.row(layout_.interior_dof(a)) = mass_.row(a) / area_;
}

void LocalSpace::compute_edge_projections(const PolyMesh&) {
  // L^2(e) projection of v onto P_{k-1}(e): \int_e b_l v = h_e mu^l(v), so the
  // coefficients are M_e^{-1} h_e [mu^0..mu^{k-1}].
  ScaledMonomialBasis1D basis1d(k_);
  edge_proj_.resize(layout_.n_facets);
  for (int e = 0; e < layout_.n_facets; ++e) {
    const Eigen::MatrixXd mass1d = basis1d.mass_matrix(facet_lengths_[e]);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(k_, layout_.total);
    for (int l = 0; l < k_; ++l) rhs(l, layout_.facet_dof(e, l)) = facet_lengths_[e];
    edge_proj_[e] = mass1d.ldlt().solve(rhs);
  }
}

void LocalSpace::compute_pi_nabla(const PolyMesh&) {
  const int nk = basis_.size();

  // Stiffness matrix G(a,b) = \int_E grad m_a . grad m_b.
  Eigen::MatrixXd gx, gy;
  basis_.eval_gradients(cell_quad_.points, gx, gy);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(cell_quad_.weights.data(), cell_quad_.size());
  Eigen::MatrixXd G = gx.transpose() * w.asDiagonal() * gx + gy.transpose() * w.asDiagonal() * gy;

  // B(a,i) realizes \int_E grad m_a . grad v = -\int_E (lap m_a) v
  // + \int_{dE} (grad m_a . n) v through the DoFs of v.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nk, layout_.total);
  ScaledMonomialBasis1D basis1d(k_);
  for (int a = 0; a < nk; ++a)
    for (const auto& [gamma, coeff] : basis_.laplacian_coefficients(a))
      B(a, layout_.interior_dof(gamma)) -= coeff * area_;
  for (int e = 0; e < layout_.n_facets; ++e) {
    const QuadratureRule& quad = facet_quads_[e];
    Eigen::MatrixXd gex, gey;
    basis_.eval_gradients(quad.points, gex, gey);
    const Eigen::MatrixXd bvals = basis1d.eval(quad.param); // q x k
    const Vec2& n = facet_normals_[e];
    // Expand grad m_a . n|_e (degree <= k-1 along e) in the 1D basis; then
    // \int_e (grad m_a . n) v = sum_l d_l h_e mu^l(v).
    Eigen::MatrixXd rhs(k_, nk);
    for (int l = 0; l < k_; ++l)
      for (int a = 0; a < nk; ++a) {
        double acc = 0.0;
        for (int q = 0; q < quad.size(); ++q)
          acc += quad.weights[q] * bvals(q, l) * (n.x() * gex(q, a) + n.y() * gey(q, a));
        rhs(l, a) = acc;
      }
    const Eigen::MatrixXd d = basis1d.mass_matrix(facet_lengths_[e]).ldlt().solve(rhs); // k x nk
    for (int l = 0; l < k_; ++l)
      for (int a = 0; a < nk; ++a) B(a, layout_.facet_dof(e, l)) += facet_lengths_[e] * d(l, a);
  }

  // The constant part is fixed by matching boundary mean values:
  // (1/|dE|) \int_{dE} pi v = (1/|dE|) \int_{dE} v.
  const double perimeter =
      std::accumulate(facet_lengths_.begin(), facet_lengths_.end(), 0.0);
  for (int b = 0; b < nk; ++b) {
    double acc = 0.0;
    for (int e = 0; e < layout_.n_facets; ++e) {
      const QuadratureRule& quad = facet_quads_[e];
      const Eigen::MatrixXd mvals = basis_.eval(quad.points);
      for (int q = 0; q < quad.size(); ++q) acc += quad.weights[q] * mvals(q, b);
    }
    G(0, b) = acc / perimeter;
  }
  B.row(0).setZero();
  for (int e = 0; e < layout_.n_facets; ++e)
    B(0, layout_.facet_dof(e, 0)) = facet_lengths_[e] / perimeter;

  pi_nabla_ = G.partialPivLu().solve(B);
}

void LocalSpace::compute_pi_0() {
  const int nk = basis_.size();
  const int n_low = layout_.interior_dofs; // dim P_{k-2}
  // Moments of degree <= k-2 are DoFs; the missing top-degree moments are
  // borrowed from the H^1 projection (enhancement).
  Eigen::MatrixXd C = (mass_ * pi_nabla_).eval();
  for (int g = 0; g < n_low; ++g) {
    C.row(g).setZero();
    C(g, layout_.interior_dof(g)) = area_;
  }
  pi_0_ = mass_.ldlt().solve(C);
}

void LocalSpace::compute_pi_0_grad(const PolyMesh&) {
  const int nl = basis_grad_.size(); // dim P_{k-1}
  // \int_E (d_d v) m_g = -\int_E v (d_d m_g) + \int_{dE} v m_g n_d; the volume
  // term hits interior moments, the boundary term expands m_g|_e in the 1D
  // facet basis exactly (degree <= k-1).
  Eigen::MatrixXd Bx = Eigen::MatrixXd::Zero(nl, layout_.total);
  Eigen::MatrixXd By = Eigen::MatrixXd::Zero(nl, layout_.total);
  const auto& exps = basis_grad_.exponents();
  for (int g = 0; g < nl; ++g) {
    const int ax = exps[g][0], ay = exps[g][1];
    if (ax > 0) Bx(g, layout_.interior_dof(monomial_index(ax - 1, ay))) -= ax / diameter_ * area_;
    if (ay > 0) By(g, layout_.interior_dof(monomial_index(ax, ay - 1))) -= ay / diameter_ * area_;
  }
  ScaledMonomialBasis1D basis1d(k_);
  for (int e = 0; e < layout_.n_facets; ++e) {
    const QuadratureRule& quad = facet_quads_[e];
    const Eigen::MatrixXd mvals = basis_.eval(quad.points); // prefix nl columns = P_{k-1}
    const Eigen::MatrixXd bvals = basis1d.eval(quad.param);
    Eigen::MatrixXd rhs(k_, nl);
    for (int l = 0; l < k_; ++l)
      for (int g = 0; g < nl; ++g) {
        double acc = 0.0;
        for (int q = 0; q < quad.size(); ++q) acc += quad.weights[q] * bvals(q, l) * mvals(q, g);
        rhs(l, g) = acc;
      }
    const Eigen::MatrixXd c = basis1d.mass_matrix(facet_lengths_[e]).ldlt().solve(rhs); // k x nl
    const Vec2& n = facet_normals_[e];
    for (int g = 0; g < nl; ++g)
      for (int l = 0; l < k_; ++l) {
        const double flux = facet_lengths_[e] * c(l, g);
        Bx(g, layout_.facet_dof(e, l)) += n.x() * flux;
        By(g, layout_.facet_dof(e, l)) += n.y() * flux;
      }
  }
  const auto solver = mass_matrix_grad().ldlt();
  pi_0_grad_x_ = solver.solve(Bx);
  pi_0_grad_y_ = solver.solve(By);
}

Eigen::VectorXd LocalSpace::dofs_of(const std::function<double(const Vec2&)>& f) const {
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(layout_.total);
  ScaledMonomialBasis1D basis1d(k_);
  for (int e = 0; e < layout_.n_facets; ++e) {
    const QuadratureRule& quad = facet_quads_[e];
    const Eigen::MatrixXd bvals = basis1d.eval(quad.param);
    for (int l = 0; l < k_; ++l) {
      double acc = 0.0;
      for (int q = 0; q < quad.size(); ++q) acc += quad.weights[q] * f(quad.points[q]) * bvals(q, l);
      dofs[layout_.facet_dof(e, l)] = acc / facet_lengths_[e];
    }
  }
  if (layout_.interior_dofs > 0) {
    const Eigen::MatrixXd mvals = basis_.eval(cell_quad_.points);
    for (int a = 0; a < layout_.interior_dofs; ++a) {
      double acc = 0.0;
      for (int q = 0; q < cell_quad_.size(); ++q)
        acc += cell_quad_.weights[q] * f(cell_quad_.points[q]) * mvals(q, a);
      dofs[layout_.interior_dof(a)] = acc / area_;
    }
  }
  return dofs;
}

Eigen::VectorXd LocalSpace::dofs_of_polynomial(const Eigen::VectorXd& coeffs) const {
  return dof_matrix_ * coeffs;
}

std::vector<LocalSpace> build_local_spaces(const PolyMesh& mesh, int k, int threads) {
  const int nc = mesh.num_cells();
  std::vector<LocalSpace> spaces;
  spaces.reserve(nc);
  if (threads <= 1 || nc < 2) {
    for (int c = 0; c < nc; ++c) spaces.emplace_back(mesh, c, k);
    return spaces;
  }
  // Cells are independent, so parallel construction is bitwise identical to
  // the serial result.
  std::vector<std::optional<LocalSpace>> slots(nc);
  std::atomic<int> next(0);
  auto worker = [&]() {
    for (int c = next.fetch_add(1); c < nc; c = next.fetch_add(1)) slots[c].emplace(mesh, c, k);
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min(threads, nc);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& slot : slots) spaces.push_back(std::move(*slot));
  return spaces;
}

Eigen::VectorXd interpolate(const std::function<double(const Vec2&)>& f, const PolyMesh& mesh,
                            const std::vector<LocalSpace>& spaces, const GlobalDofMap& dofs) {
  const int k = dofs.k;
  Eigen::VectorXd global = Eigen::VectorXd::Zero(dofs.n_global);
  const int exactness = spaces.empty() ? 2 * k + 2 : spaces[0].cell_quadrature().exactness;

  ScaledMonomialBasis1D basis1d(k);
  for (int fi = 0; fi < mesh.num_facets(); ++fi) {
    const QuadratureRule quad = facet_quadrature(mesh.facets[fi], mesh, exactness);
    const Eigen::MatrixXd bvals = basis1d.eval(quad.param);
    for (int l = 0; l < k; ++l) {
      double acc = 0.0;
      for (int q = 0; q < quad.size(); ++q) acc += quad.weights[q] * f(quad.points[q]) * bvals(q, l);
      global[dofs.facet_dof(fi, l)] = acc / mesh.facets[fi].length;
    }
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const LocalSpace& ls = spaces[c];
    if (ls.layout().interior_dofs == 0) continue;
    const QuadratureRule& quad = ls.cell_quadrature();
    const Eigen::MatrixXd mvals = ls.basis().eval(quad.points);
    for (int a = 0; a < ls.layout().interior_dofs; ++a) {
      double acc = 0.0;
      for (int q = 0; q < quad.size(); ++q) acc += quad.weights[q] * f(quad.points[q]) * mvals(q, a);
      global[dofs.interior_dof(c, a)] = acc / ls.area();
    }
  }
  return global;
}

Eigen::VectorXd oswald_interpolant(const std::vector<Eigen::VectorXd>& cell_coeffs,
                                   const PolyMesh& mesh, const std::vector<LocalSpace>& spaces,
                                   const GlobalDofMap& dofs) {
  // A polynomial's local DoFs are D * coeffs; interior-facet moments are then
  // averaged between the two incident cells, boundary moments taken one-sided.
  Eigen::VectorXd global = Eigen::VectorXd::Zero(dofs.n_global);
  std::vector<Eigen::VectorXd> local(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) local[c] = spaces[c].dofs_of_polynomial(cell_coeffs[c]);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& layout = spaces[c].layout();
    for (int e = 0; e < layout.n_facets; ++e) {
      const int fi = mesh.cell_facets[c][e];
      const double share = mesh.facets[fi].is_boundary() && mesh.facets[fi].owner == c ? 1.0
                           : mesh.facets[fi].is_boundary()                             ? 0.0
                                                                                       : 0.5;
      for (int l = 0; l < layout.k; ++l)
        global[dofs.facet_dof(fi, l)] += share * local[c][layout.facet_dof(e, l)];
    }
    for (int a = 0; a < layout.interior_dofs; ++a)
      global[dofs.interior_dof(c, a)] = local[c][layout.interior_dof(a)];
  }
  return global;
}

} // namespace vemcip
