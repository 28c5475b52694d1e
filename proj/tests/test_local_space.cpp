#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vemcip/local_space.hpp"

namespace vemcip {
namespace {

Eigen::VectorXd random_coeffs(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd c(size);
  for (int i = 0; i < size; ++i) c(i) = unit(rng);
  return c;
}

// Coefficients of a smooth function's degree-k L^2 fit in the cell basis;
// exact when the function is a polynomial of degree <= k.
Eigen::VectorXd fit_on_cell(const LocalSpace& space,
                            const std::function<double(const Vec2&)>& f) {
  const QuadratureRule& rule = space.cell_quadrature();
  const Eigen::MatrixXd values = space.basis().eval(rule.points);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.basis().size());
  for (int i = 0; i < rule.size(); ++i)
    rhs += rule.weights[i] * f(rule.points[i]) * values.row(i).transpose();
  return space.mass_matrix().ldlt().solve(rhs);
}

// Scaled moment (1/h_e) int_e p (t-1/2)^l ds of a polynomial on a facet.
double facet_moment(const PolyMesh& mesh, int facet, int moment,
                    const std::function<double(const Vec2&)>& p, int exactness) {
  const QuadratureRule rule = facet_quadrature(mesh.facets[facet], mesh, exactness);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    sum += rule.weights[i] * p(rule.points[i]) *
           std::pow(rule.param[i] - 0.5, moment);
  return sum / mesh.facets[facet].length;
}

TEST(DofLayout, CountsAndIndexing) {
  const DofLayout layout(3, 8);
  EXPECT_EQ(layout.facet_dofs, 24);
  EXPECT_EQ(layout.interior_dofs, 3);
  EXPECT_EQ(layout.total, 27);
  EXPECT_EQ(layout.facet_dof(2, 1), 7);
  EXPECT_EQ(layout.interior_dof(0), 24);
}

TEST(GlobalDofMap, SingleValuedFacetDofs) {
  const PolyMesh mesh = generate_octag(2, 0.1, 1);
  for (int k = 1; k <= 3; ++k) {
    const GlobalDofMap dofs = build_dof_map(mesh, k);
    EXPECT_EQ(dofs.n_global,
              k * mesh.num_facets() + mesh.num_cells() * k * (k - 1) / 2);
    // Interior facets appear in two cells and map to the same globals.
    for (int f = 0; f < mesh.num_facets(); ++f) {
      const FacetRecord& rec = mesh.facets[f];
      if (rec.is_boundary()) continue;
      auto local_of = [&](int cell) {
        const auto& cf = mesh.cell_facets[cell];
        for (std::size_t j = 0; j < cf.size(); ++j)
          if (cf[j] == f) return static_cast<int>(j);
        return -1;
      };
      const DofLayout lo(k, static_cast<int>(mesh.cells[rec.owner].size()));
      const DofLayout ln(k, static_cast<int>(mesh.cells[rec.neighbor].size()));
      for (int m = 0; m < k; ++m) {
        const int go = dofs.cell_to_global[rec.owner][lo.facet_dof(local_of(rec.owner), m)];
        const int gn = dofs.cell_to_global[rec.neighbor][ln.facet_dof(local_of(rec.neighbor), m)];
        EXPECT_EQ(go, gn);
        EXPECT_EQ(go, dofs.facet_dof(f, m));
      }
    }
  }
}

class LocalSpaceProjectors : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(LocalSpaceProjectors, ReproducePolynomials) {
  const auto [family, k] = GetParam();
  const PolyMesh mesh =
      family == 0 ? generate_octag(2, 0.2, 21) : generate_voronoi(12, 2, 21);
  const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
  std::mt19937_64 rng(1234 + 10 * family + k);

  for (const LocalSpace& space : spaces) {
    const int np = space.basis().size();
    // Projection-of-monomial identity: pi * D = I on polynomial coefficients.
    // Tolerance allows for the k = 3 mass-matrix conditioning on stretched
    // cells; the coefficientwise error stays around 1e-12.
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(np, np);
    EXPECT_LT((space.pi_nabla() * space.dof_matrix() - eye).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((space.pi_0() * space.dof_matrix() - eye).cwiseAbs().maxCoeff(), 1e-11);

    const Eigen::VectorXd c = random_coeffs(np, rng);
    const Eigen::VectorXd dofs = space.dofs_of_polynomial(c);
    EXPECT_LT((space.pi_nabla() * dofs - c).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((space.pi_0() * dofs - c).cwiseAbs().maxCoeff(), 1e-11);

    // Gradient projection: expected coefficients from term-by-term
    // differentiation of the scaled monomials.
    const double h = space.diameter();
    Eigen::VectorXd gx = Eigen::VectorXd::Zero(space.basis_grad().size());
    Eigen::VectorXd gy = Eigen::VectorXd::Zero(space.basis_grad().size());
    const auto& exps = space.basis().exponents();
    for (int a = 0; a < np; ++a) {
      const auto [ax, ay] = exps[a];
      if (ax > 0) gx(monomial_index(ax - 1, ay)) += c(a) * ax / h;
      if (ay > 0) gy(monomial_index(ax, ay - 1)) += c(a) * ay / h;
    }
    EXPECT_LT((space.pi_0_grad_x() * dofs - gx).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_LT((space.pi_0_grad_y() * dofs - gy).cwiseAbs().maxCoeff(), 1e-11);

    // Edge projections reproduce traces of degree k-1 polynomials exactly.
    Eigen::VectorXd clow = random_coeffs(np, rng);
    for (int a = 0; a < np; ++a)
      if (exps[a][0] + exps[a][1] > k - 1) clow(a) = 0.0;
    const Eigen::VectorXd dofs_low = space.dofs_of_polynomial(clow);
    auto plow = [&](const Vec2& p) {
      double v = 0.0;
      for (int a = 0; a < np; ++a) {
        if (clow(a) == 0.0) continue;
        const Vec2 z = (p - space.centroid()) / h;
        v += clow(a) * std::pow(z.x(), exps[a][0]) * std::pow(z.y(), exps[a][1]);
      }
      return v;
    };
    for (std::size_t j = 0; j < space.facet_ids().size(); ++j) {
      const int f = space.facet_ids()[j];
      const Eigen::VectorXd trace = space.edge_projection(static_cast<int>(j)) * dofs_low;
      const QuadratureRule rule = facet_quadrature(mesh.facets[f], mesh, 2 * k + 2);
      for (int i = 0; i < rule.size(); ++i) {
        double proj = 0.0;
        for (int l = 0; l < k; ++l) proj += trace(l) * std::pow(rule.param[i] - 0.5, l);
        EXPECT_NEAR(proj, plow(rule.points[i]), 1e-11);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Families, LocalSpaceProjectors,
                         ::testing::Combine(::testing::Values(0, 1),
                                            ::testing::Values(1, 2, 3)));

TEST(LocalSpace, OrderOneProjectorsCoincide) {
  const PolyMesh mesh = generate_voronoi(10, 2, 2);
  for (const LocalSpace& space : build_local_spaces(mesh, 1))
    EXPECT_LT((space.pi_0() - space.pi_nabla()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(LocalSpace, DofsOfAgreesWithPolynomialPath) {
  const PolyMesh mesh = generate_octag(2, 0.15, 9);
  for (int k = 1; k <= 3; ++k) {
    const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
    std::mt19937_64 rng(77 + k);
    for (const LocalSpace& space : spaces) {
      const Eigen::VectorXd c = random_coeffs(space.basis().size(), rng);
      const auto& exps = space.basis().exponents();
      auto p = [&](const Vec2& x) {
        const Vec2 z = (x - space.centroid()) / space.diameter();
        double v = 0.0;
        for (int a = 0; a < c.size(); ++a)
          v += c(a) * std::pow(z.x(), exps[a][0]) * std::pow(z.y(), exps[a][1]);
        return v;
      };
      const Eigen::VectorXd direct = space.dofs_of(p);
      const Eigen::VectorXd via_coeffs = space.dofs_of_polynomial(c);
      EXPECT_LT((direct - via_coeffs).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

TEST(LocalSpace, ThreadCountDoesNotChangeResults) {
  const PolyMesh mesh = generate_voronoi(20, 2, 31);
  const std::vector<LocalSpace> serial = build_local_spaces(mesh, 2, 1);
  const std::vector<LocalSpace> parallel = build_local_spaces(mesh, 2, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t c = 0; c < serial.size(); ++c) {
    EXPECT_EQ((serial[c].pi_nabla() - parallel[c].pi_nabla()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((serial[c].pi_0() - parallel[c].pi_0()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Interpolate, MatchesLocalMoments) {
  const PolyMesh mesh = generate_voronoi(15, 2, 8);
  auto f = [](const Vec2& p) { return std::sin(3.0 * p.x()) * std::exp(p.y()); };
  for (int k = 1; k <= 3; ++k) {
    const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
    const GlobalDofMap dofs = build_dof_map(mesh, k);
    const Eigen::VectorXd u = interpolate(f, mesh, spaces, dofs);
    ASSERT_EQ(u.size(), dofs.n_global);
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const Eigen::VectorXd local = spaces[c].dofs_of(f);
      for (int i = 0; i < local.size(); ++i)
        EXPECT_NEAR(u(dofs.cell_to_global[c][i]), local(i), 1e-13);
    }
  }
}

TEST(Oswald, FacetMomentsAreAverages) {
  const PolyMesh mesh = generate_voronoi(12, 2, 13);
  const int k = 2;
  const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
  const GlobalDofMap dofs = build_dof_map(mesh, k);
  std::mt19937_64 rng(5);
  std::vector<Eigen::VectorXd> coeffs(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c)
    coeffs[c] = random_coeffs(spaces[c].basis().size(), rng);

  const Eigen::VectorXd pi = oswald_interpolant(coeffs, mesh, spaces, dofs);

  auto cell_poly = [&](int c) {
    return [&spaces, &coeffs, c](const Vec2& p) {
      const auto& exps = spaces[c].basis().exponents();
      const Vec2 z = (p - spaces[c].centroid()) / spaces[c].diameter();
      double v = 0.0;
      for (int a = 0; a < coeffs[c].size(); ++a)
        v += coeffs[c](a) * std::pow(z.x(), exps[a][0]) * std::pow(z.y(), exps[a][1]);
      return v;
    };
  };

  for (int f = 0; f < mesh.num_facets(); ++f) {
    const FacetRecord& rec = mesh.facets[f];
    for (int m = 0; m < k; ++m) {
      const double mu_owner = facet_moment(mesh, f, m, cell_poly(rec.owner), 2 * k + 2);
      const double expected =
          rec.is_boundary()
              ? mu_owner
              : 0.5 * (mu_owner + facet_moment(mesh, f, m, cell_poly(rec.neighbor), 2 * k + 2));
      EXPECT_NEAR(pi(dofs.facet_dof(f, m)), expected, 1e-12);
    }
  }
}

TEST(Oswald, FixesContinuousPolynomials) {
  const PolyMesh mesh = generate_octag(2, 0.2, 4);
  for (int k = 1; k <= 3; ++k) {
    const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
    const GlobalDofMap dofs = build_dof_map(mesh, k);
    auto p = [k](const Vec2& x) { return std::pow(x.x() + 0.3 * x.y(), k) + x.y(); };
    std::vector<Eigen::VectorXd> coeffs(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) coeffs[c] = fit_on_cell(spaces[c], p);
    const Eigen::VectorXd pi = oswald_interpolant(coeffs, mesh, spaces, dofs);
    const Eigen::VectorXd u_i = interpolate(p, mesh, spaces, dofs);
    EXPECT_LT((pi - u_i).cwiseAbs().maxCoeff(), 1e-11) << "k=" << k;
  }
}

} // namespace
} // namespace vemcip
