#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "vemcip/errors.hpp"

namespace vemcip {
namespace {

struct Term {
  int p, q;
  double c;
};

// Global-coordinate polynomial problem with constant advection: the scheme
// must reproduce it to solver precision on any admissible mesh.
ManufacturedProblem polynomial_problem(std::vector<Term> terms, const Vec2& beta_const,
                                       double eps, double sigma) {
  ManufacturedProblem prob;
  prob.name = "poly";
  prob.eps = eps;
  prob.sigma = sigma;
  prob.beta_max = beta_const.norm();
  prob.beta = [beta_const](const Vec2&) { return beta_const; };
  prob.beta_jacobian = [](const Vec2&) { return Eigen::Matrix2d::Zero().eval(); };
  auto value = [terms](const Vec2& x) {
    double v = 0.0;
    for (const Term& t : terms) v += t.c * std::pow(x.x(), t.p) * std::pow(x.y(), t.q);
    return v;
  };
  auto grad = [terms](const Vec2& x) {
    Vec2 g = Vec2::Zero();
    for (const Term& t : terms) {
      if (t.p > 0) g.x() += t.c * t.p * std::pow(x.x(), t.p - 1) * std::pow(x.y(), t.q);
      if (t.q > 0) g.y() += t.c * t.q * std::pow(x.x(), t.p) * std::pow(x.y(), t.q - 1);
    }
    return g;
  };
  auto lap = [terms](const Vec2& x) {
    double v = 0.0;
    for (const Term& t : terms) {
      if (t.p > 1)
        v += t.c * t.p * (t.p - 1) * std::pow(x.x(), t.p - 2) * std::pow(x.y(), t.q);
      if (t.q > 1)
        v += t.c * t.q * (t.q - 1) * std::pow(x.x(), t.p) * std::pow(x.y(), t.q - 2);
    }
    return v;
  };
  prob.u = value;
  prob.grad_u = grad;
  prob.laplacian_u = lap;
  prob.f = [value, grad, lap, beta_const, eps, sigma](const Vec2& x) {
    return -eps * lap(x) + beta_const.dot(grad(x)) + sigma * value(x);
  };
  prob.g = value;
  return prob;
}

std::vector<Term> random_terms(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Term> terms;
  for (int p = 0; p <= degree; ++p)
    for (int q = 0; p + q <= degree; ++q) terms.push_back({p, q, unit(rng)});
  return terms;
}

struct Solved {
  std::vector<LocalSpace> spaces;
  GlobalDofMap dofs;
  GlobalSystem system;
  Eigen::VectorXd solution;
};

Solved solve_problem(const PolyMesh& mesh, const ManufacturedProblem& prob, int k,
                     int threads = 1) {
  Solved out;
  out.spaces = build_local_spaces(mesh, k, threads);
  out.dofs = build_dof_map(mesh, k);
  const ModelParams params = params_for(prob, k);
  out.system = assemble(mesh, out.spaces, out.dofs, params, prob.f, prob.g, threads);
  out.solution = solve(out.system);
  return out;
}

class PatchTest : public ::testing::TestWithParam<std::tuple<int, int, double>> {};

TEST_P(PatchTest, PolynomialsAreReproduced) {
  const auto [family, k, eps] = GetParam();
  const PolyMesh mesh =
      family == 0 ? generate_octag(3, 0.2, 91) : generate_voronoi(32, 2, 91);
  std::mt19937_64 rng(1000 + 100 * family + 10 * k + (eps < 1.0));
  const ManufacturedProblem prob =
      polynomial_problem(random_terms(k, rng), Vec2{1.3, -0.6}, eps, 1.0);

  const Solved run = solve_problem(mesh, prob, k);
  const double e_h1 = error_h1(mesh, run.spaces, run.dofs, run.solution, prob);
  const double e_l2 = error_l2(mesh, run.spaces, run.dofs, run.solution, prob);
  EXPECT_LT(e_h1, 1e-8) << "family=" << family << " k=" << k << " eps=" << eps;
  EXPECT_LT(e_l2, 1e-9);

  // The solution DoFs coincide with the interpolant of the exact solution.
  const Eigen::VectorXd u_i = interpolate(prob.u, mesh, run.spaces, run.dofs);
  EXPECT_LT((run.solution - u_i).cwiseAbs().maxCoeff(), 1e-8);

  const ModelParams params = params_for(prob, k);
  const CipErrorBreakdown cip =
      error_cip(mesh, run.spaces, run.dofs, run.solution, prob, params);
  EXPECT_LT(std::sqrt(cip.total_squared()), 1e-7);
}

INSTANTIATE_TEST_SUITE_P(FamiliesOrdersEps, PatchTest,
                         ::testing::Combine(::testing::Values(0, 1),
                                            ::testing::Values(1, 2, 3),
                                            ::testing::Values(1.0, 1e-5)));

TEST(Assembly, BitwiseDeterministicAcrossRunsAndThreads) {
  const PolyMesh mesh = generate_voronoi(24, 2, 7);
  const ManufacturedProblem prob = manufactured("u1", 1e-3);
  const Solved a = solve_problem(mesh, prob, 2, 1);
  const Solved b = solve_problem(mesh, prob, 2, 1);
  const Solved c = solve_problem(mesh, prob, 2, 4);
  ASSERT_EQ(a.solution.size(), b.solution.size());
  EXPECT_EQ((a.solution - b.solution).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.solution - c.solution).cwiseAbs().maxCoeff(), 0.0);
  // Matrices agree entry-for-entry as stored.
  ASSERT_EQ(a.system.matrix.nonZeros(), c.system.matrix.nonZeros());
  for (int i = 0; i < a.system.matrix.nonZeros(); ++i)
    EXPECT_EQ(a.system.matrix.valuePtr()[i], c.system.matrix.valuePtr()[i]);
}

TEST(Assembly, PureDiffusionReactionIsSymmetric) {
  const PolyMesh mesh = generate_octag(2, 0.1, 3);
  const std::vector<LocalSpace> spaces = build_local_spaces(mesh, 2);
  const GlobalDofMap dofs = build_dof_map(mesh, 2);
  ModelParams params;
  params.eps = 0.7;
  params.sigma = 1.3;
  params.k = 2;
  params.beta = [](const Vec2&) { return Vec2::Zero().eval(); };
  const ScalarField one = [](const Vec2&) { return 1.0; };
  const ScalarField zero = [](const Vec2&) { return 0.0; };
  const GlobalSystem system = assemble(mesh, spaces, dofs, params, one, zero);
  const Eigen::SparseMatrix<double> diff =
      Eigen::SparseMatrix<double>(system.matrix.transpose()) - system.matrix;
  double max_asym = 0.0;
  for (int j = 0; j < diff.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, j); it; ++it)
      max_asym = std::max(max_asym, std::abs(it.value()));
  EXPECT_LT(max_asym, 1e-13);
}

TEST(Assembly, ResidualWithinAdvertisedBound) {
  const PolyMesh mesh = generate_voronoi(40, 2, 15);
  const ManufacturedProblem prob = manufactured("u2", 1e-4);
  const Solved run = solve_problem(mesh, prob, 2);
  const double residual = (run.system.matrix * run.solution - run.system.rhs).norm();
  EXPECT_LE(residual, 1e-10 * run.system.rhs.norm());
}

TEST(Solve, ThrowsOnSingularMatrix) {
  GlobalSystem system;
  system.matrix = Eigen::SparseMatrix<double>(2, 2);
  system.matrix.insert(0, 0) = 1.0;
  system.matrix.insert(0, 1) = 1.0;
  system.matrix.insert(1, 0) = 1.0;
  system.matrix.insert(1, 1) = 1.0;
  system.matrix.makeCompressed();
  system.rhs = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(solve(system), SolverError);
}

TEST(MatrixMarket, WritesCoordinateFormat) {
  const PolyMesh mesh = generate_octag(1, 0.0, 0);
  const ManufacturedProblem prob = manufactured("u1", 1e-2);
  const Solved run = solve_problem(mesh, prob, 1);
  const std::string path =
      (std::filesystem::temp_directory_path() / "vemcip_system.mtx").string();
  write_matrix_market(run.system.matrix, path);
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("%%MatrixMarket matrix coordinate real general"), std::string::npos);
  int rows = 0, cols = 0;
  long nnz = 0;
  in >> rows >> cols >> nnz;
  EXPECT_EQ(rows, run.system.matrix.rows());
  EXPECT_EQ(cols, run.system.matrix.cols());
  EXPECT_EQ(nnz, static_cast<long>(run.system.matrix.nonZeros()));
  // Every listed entry is 1-based and in range.
  int r = 0, c = 0;
  double v = 0.0;
  long listed = 0;
  while (in >> r >> c >> v) {
    EXPECT_GE(r, 1);
    EXPECT_LE(r, rows);
    EXPECT_GE(c, 1);
    EXPECT_LE(c, cols);
    ++listed;
  }
  EXPECT_EQ(listed, nnz);
  std::filesystem::remove(path);
}

} // namespace
} // namespace vemcip
