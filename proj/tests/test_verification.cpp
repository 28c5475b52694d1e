#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "vemcip/study.hpp"

namespace vemcip {
namespace {

namespace fs = std::filesystem;

std::vector<Vec2> sample_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Keep clear of the boundary so finite-difference stencils stay inside.
  std::uniform_real_distribution<double> interior(0.01, 0.99);
  std::vector<Vec2> points(count);
  for (auto& p : points) p = Vec2{interior(rng), interior(rng)};
  return points;
}

class ManufacturedConsistency : public ::testing::TestWithParam<std::string> {};

TEST_P(ManufacturedConsistency, DerivativesMatchFiniteDifferences) {
  const ManufacturedProblem prob = manufactured(GetParam(), 1e-3);
  const double step = 1e-6;
  for (const Vec2& p : sample_points(40, 11)) {
    const Vec2 dx{step, 0.0}, dy{0.0, step};
    const Vec2 fd_grad{(prob.u(p + dx) - prob.u(p - dx)) / (2 * step),
                       (prob.u(p + dy) - prob.u(p - dy)) / (2 * step)};
    const Vec2 grad = prob.grad_u(p);
    EXPECT_NEAR(grad.x(), fd_grad.x(), 1e-4 * (1.0 + std::abs(grad.x())));
    EXPECT_NEAR(grad.y(), fd_grad.y(), 1e-4 * (1.0 + std::abs(grad.y())));

    // Laplacian against first differences of the closed-form gradient.
    const double fd_lap = (prob.grad_u(p + dx).x() - prob.grad_u(p - dx).x()) / (2 * step) +
                          (prob.grad_u(p + dy).y() - prob.grad_u(p - dy).y()) / (2 * step);
    EXPECT_NEAR(prob.laplacian_u(p), fd_lap, 1e-4 * (1.0 + std::abs(fd_lap)));
  }
}

TEST_P(ManufacturedConsistency, SourceTermClosesTheEquation) {
  const double eps = 3e-4, sigma = 1.0;
  const ManufacturedProblem prob = manufactured(GetParam(), eps, sigma);
  EXPECT_EQ(prob.eps, eps);
  EXPECT_EQ(prob.sigma, sigma);
  for (const Vec2& p : sample_points(40, 12)) {
    const double expected =
        -eps * prob.laplacian_u(p) + prob.beta(p).dot(prob.grad_u(p)) + sigma * prob.u(p);
    EXPECT_NEAR(prob.f(p), expected, 1e-12 * (1.0 + std::abs(expected)));
    EXPECT_EQ(prob.g(p), prob.u(p));
  }
}

TEST_P(ManufacturedConsistency, AdvectionFieldIsDivergenceFree) {
  const ManufacturedProblem prob = manufactured(GetParam(), 1e-2);
  const double step = 1e-6;
  for (const Vec2& p : sample_points(40, 13)) {
    const Eigen::Matrix2d jac = prob.beta_jacobian(p);
    EXPECT_NEAR(jac.trace(), 0.0, 1e-12);
    // Jacobian cross-checked against finite differences of beta.
    const Vec2 dx{step, 0.0}, dy{0.0, step};
    const Vec2 col0 = (prob.beta(p + dx) - prob.beta(p - dx)) / (2 * step);
    const Vec2 col1 = (prob.beta(p + dy) - prob.beta(p - dy)) / (2 * step);
    EXPECT_NEAR(jac(0, 0), col0.x(), 1e-4 * (1.0 + std::abs(jac(0, 0))));
    EXPECT_NEAR(jac(1, 0), col0.y(), 1e-4 * (1.0 + std::abs(jac(1, 0))));
    EXPECT_NEAR(jac(0, 1), col1.x(), 1e-4 * (1.0 + std::abs(jac(0, 1))));
    EXPECT_NEAR(jac(1, 1), col1.y(), 1e-4 * (1.0 + std::abs(jac(1, 1))));
  }
}

TEST_P(ManufacturedConsistency, SpeedBoundIsSharp) {
  const ManufacturedProblem prob = manufactured(GetParam(), 1e-2);
  EXPECT_NEAR(prob.beta_max, std::sqrt(5.0) * M_PI, 1e-12);
  double observed = 0.0;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      const Vec2 p{i / 400.0, j / 400.0};
      observed = std::max(observed, prob.beta(p).norm());
    }
  EXPECT_LE(observed, prob.beta_max + 1e-12);
  EXPECT_GT(observed, 0.999 * prob.beta_max);
}

INSTANTIATE_TEST_SUITE_P(Problems, ManufacturedConsistency, ::testing::Values("u1", "u2"));

TEST(Manufactured, BoundaryLayerProblemIsHomogeneous) {
  const ManufacturedProblem prob = manufactured("u2", 1e-3);
  for (int i = 0; i <= 50; ++i) {
    const double t = i / 50.0;
    EXPECT_NEAR(prob.u(Vec2{t, 0.0}), 0.0, 1e-13);
    EXPECT_NEAR(prob.u(Vec2{t, 1.0}), 0.0, 1e-13);
    EXPECT_NEAR(prob.u(Vec2{0.0, t}), 0.0, 1e-13);
    EXPECT_NEAR(prob.u(Vec2{1.0, t}), 0.0, 1e-13);
  }
}

TEST(Manufactured, RejectsUnknownNameAndBadCoefficients) {
  EXPECT_THROW(manufactured("u3", 1e-3), std::invalid_argument);
  EXPECT_THROW(manufactured("u1", -1.0), std::invalid_argument);
  EXPECT_THROW(manufactured("u1", 0.0), std::invalid_argument);
}

TEST(ParamsFor, MirrorsProblemCoefficients) {
  const ManufacturedProblem prob = manufactured("u1", 2e-4, 1.5);
  const ModelParams params = params_for(prob, 2, 0.2, 0.03, 0.04);
  EXPECT_EQ(params.eps, 2e-4);
  EXPECT_EQ(params.sigma, 1.5);
  EXPECT_EQ(params.delta, 0.2);
  EXPECT_EQ(params.kappa_e, 0.03);
  EXPECT_EQ(params.kappa_E, 0.04);
  EXPECT_EQ(params.k, 2);
  EXPECT_EQ(params.quad_exactness(), 6);
  const Vec2 p{0.3, 0.4};
  EXPECT_EQ((params.beta(p) - prob.beta(p)).norm(), 0.0);
}

// Synthetic polynomial problem solely to drive the error module: with
// u_h := interpolant of u every error measure must vanish, and with u_h := 0
// the errors reduce to norms of u with quadrature oracles.
TEST(Errors, VanishOnInterpolatedPolynomials) {
  const PolyMesh mesh = generate_voronoi(14, 2, 44);
  for (int k = 1; k <= 3; ++k) {
    ManufacturedProblem prob;
    prob.name = "poly";
    prob.eps = 0.01;
    prob.sigma = 1.0;
    prob.beta = [](const Vec2&) { return Vec2{1.0, 2.0}; };
    prob.beta_jacobian = [](const Vec2&) { return Eigen::Matrix2d::Zero().eval(); };
    prob.beta_max = std::sqrt(5.0);
    const int kk = k;
    prob.u = [kk](const Vec2& p) { return std::pow(p.x() - 0.4 * p.y(), kk); };
    prob.grad_u = [kk](const Vec2& p) {
      const double base = kk * std::pow(p.x() - 0.4 * p.y(), kk - 1);
      return Vec2{base, -0.4 * base};
    };
    prob.laplacian_u = [kk](const Vec2& p) {
      return kk < 2 ? 0.0 : (1.0 + 0.16) * kk * (kk - 1) * std::pow(p.x() - 0.4 * p.y(), kk - 2);
    };
    prob.f = [&prob](const Vec2& p) {
      return -prob.eps * prob.laplacian_u(p) + prob.beta(p).dot(prob.grad_u(p)) +
             prob.sigma * prob.u(p);
    };
    prob.g = prob.u;

    const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
    const GlobalDofMap dofs = build_dof_map(mesh, k);
    const Eigen::VectorXd u_i = interpolate(prob.u, mesh, spaces, dofs);
    EXPECT_LT(error_h1(mesh, spaces, dofs, u_i, prob), 1e-11);
    EXPECT_LT(error_l2(mesh, spaces, dofs, u_i, prob), 1e-12);
    const CipErrorBreakdown cip =
        error_cip(mesh, spaces, dofs, u_i, prob, params_for(prob, k));
    EXPECT_LT(std::sqrt(cip.total_squared()), 1e-10);
  }
}

TEST(Errors, ZeroSolutionGivesNormsOfU) {
  const PolyMesh mesh = generate_octag(2, 0.1, 5);
  const int k = 2;
  ManufacturedProblem prob;
  prob.name = "poly";
  prob.eps = 1.0;
  prob.sigma = 1.0;
  prob.beta = [](const Vec2&) { return Vec2{0.5, 0.5}; };
  prob.beta_jacobian = [](const Vec2&) { return Eigen::Matrix2d::Zero().eval(); };
  prob.beta_max = std::sqrt(0.5);
  prob.u = [](const Vec2& p) { return p.x() * p.x() - p.y(); };
  prob.grad_u = [](const Vec2& p) { return Vec2{2.0 * p.x(), -1.0}; };
  prob.laplacian_u = [](const Vec2&) { return 2.0; };
  prob.f = prob.u;
  prob.g = prob.u;

  const std::vector<LocalSpace> spaces = build_local_spaces(mesh, k);
  const GlobalDofMap dofs = build_dof_map(mesh, k);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(dofs.n_global);

  double h1_sq = 0.0, l2_sq = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const QuadratureRule& rule = spaces[c].cell_quadrature();
    for (int i = 0; i < rule.size(); ++i) {
      h1_sq += rule.weights[i] * prob.grad_u(rule.points[i]).squaredNorm();
      l2_sq += rule.weights[i] * prob.u(rule.points[i]) * prob.u(rule.points[i]);
    }
  }
  EXPECT_NEAR(error_h1(mesh, spaces, dofs, zero, prob), std::sqrt(h1_sq), 1e-12);
  EXPECT_NEAR(error_l2(mesh, spaces, dofs, zero, prob), std::sqrt(l2_sq), 1e-12);

  const CipErrorBreakdown cip = error_cip(mesh, spaces, dofs, zero, prob, params_for(prob, k));
  EXPECT_NEAR(cip.diffusion, prob.eps * h1_sq, 1e-12);
  EXPECT_NEAR(cip.reaction, prob.sigma * l2_sq, 1e-12);
  EXPECT_GT(cip.boundary_projection, 0.0);
  EXPECT_GT(cip.inflow, 0.0);
  // u is smooth, so the interpolant carries no gradient jumps: with u_h = 0
  // the jump term is J(u_I, u_I) which vanishes for a global polynomial.
  EXPECT_LT(cip.jump, 1e-16);
}

TEST(LeastSquaresSlope, RecoversExactPowerLaw) {
  std::vector<double> x, y;
  for (double h : {0.5, 0.25, 0.125, 0.0625}) {
    x.push_back(h);
    y.push_back(3.7 * std::pow(h, 2.31));
  }
  EXPECT_NEAR(least_squares_slope(x, y), 2.31, 1e-12);
  // Non-finite pairs are ignored rather than poisoning the fit.
  x.push_back(0.03125);
  y.push_back(std::nan(""));
  EXPECT_NEAR(least_squares_slope(x, y), 2.31, 1e-12);
}

StudyConfig tiny_config() {
  StudyConfig config;
  config.problem = "u1";
  config.k = 1;
  config.eps = 1e-2;
  config.octag_ladder = {2, 4};
  config.voro_ladder = {8, 32};
  return config;
}

TEST(ConvergenceStudy, ErrorsDecreaseUnderRefinement) {
  // Fine enough for the internal layer to be resolved so errors shrink.
  StudyConfig config = tiny_config();
  config.octag_ladder = {8, 16};
  const std::vector<StudyRow> rows = convergence_study(config, MeshFamily::Octag);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(std::isnan(rows[0].rate_h1));
  EXPECT_LT(rows[1].h, rows[0].h);
  EXPECT_LT(rows[1].e_h1, rows[0].e_h1);
  EXPECT_LT(rows[1].e_l2, rows[0].e_l2);
  EXPECT_GT(rows[1].rate_h1, 0.0);
  EXPECT_GT(rows[1].n_dofs, rows[0].n_dofs);
  for (const StudyRow& row : rows) {
    EXPECT_EQ(row.k, 1);
    EXPECT_EQ(row.eps, 1e-2);
    EXPECT_GT(row.e_cip, 0.0);
    EXPECT_GE(row.seconds, 0.0);
  }
}

TEST(RobustnessSweep, FixedMeshSweepsEps) {
  const std::vector<double> eps_values = {1.0, 1e-4};
  const std::vector<StudyRow> rows =
      robustness_sweep(tiny_config(), MeshFamily::Voro, 1, eps_values);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].h, rows[1].h);
  EXPECT_EQ(rows[0].n_dofs, rows[1].n_dofs);
  EXPECT_EQ(rows[0].eps, 1.0);
  EXPECT_EQ(rows[1].eps, 1e-4);
  EXPECT_TRUE(std::isnan(rows[1].rate_cip));
  for (const StudyRow& row : rows) EXPECT_GT(row.e_cip, 0.0);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// The seconds column is wall-clock time and legitimately varies between
// runs; every other column must be reproduced digit-for-digit.
std::string strip_seconds(const std::string& csv_line) {
  const std::size_t comma = csv_line.rfind(',');
  return comma == std::string::npos ? csv_line : csv_line.substr(0, comma);
}

TEST(CsvOutput, HeaderAndDeterministicColumns) {
  const StudyConfig config = tiny_config();
  const std::vector<StudyRow> rows = convergence_study(config, MeshFamily::Octag);
  const fs::path dir = fs::temp_directory_path();
  const std::string path_a = (dir / "vemcip_a.csv").string();
  const std::string path_b = (dir / "vemcip_b.csv").string();
  write_csv(path_a, config, rows);
  write_csv(path_b, config, convergence_study(config, MeshFamily::Octag));

  const std::vector<std::string> a = read_lines(path_a);
  const std::vector<std::string> b = read_lines(path_b);
  ASSERT_EQ(a.size(), 4u); // config comment, column header, two rows
  EXPECT_EQ(a[0][0], '#');
  EXPECT_NE(a[0].find("problem=u1"), std::string::npos);
  EXPECT_NE(a[0].find("k=1"), std::string::npos);
  EXPECT_EQ(a[1], "family,level,k,eps,h,N,eH1,eL2,ecip,rateH1,rateL2,rateCIP,seconds");
  EXPECT_NE(a[2].find("octag,0,1,"), std::string::npos);
  EXPECT_NE(a[2].find("nan"), std::string::npos); // first-row rates
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(strip_seconds(a[i]), strip_seconds(b[i])) << "line " << i;
  fs::remove(path_a);
  fs::remove(path_b);
}

TEST(SvgOutput, SelfContainedPlotWithEmbeddedData) {
  const StudyConfig config = tiny_config();
  const std::vector<StudyRow> rows = convergence_study(config, MeshFamily::Octag);
  const std::string path = (fs::temp_directory_path() / "vemcip_plot.svg").string();
  write_svg_loglog(path, "test plot", rows);
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string svg = buffer.str();
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
  // The plotted numbers are embedded as a comment, one series per line.
  EXPECT_NE(svg.find("octag eH1:"), std::string::npos);
  EXPECT_NE(svg.find("octag ecip:"), std::string::npos);
  EXPECT_NE(svg.find("test plot"), std::string::npos);
  fs::remove(path);
}

TEST(SolveOnMesh, LabelsRowAndTimes) {
  const PolyMesh mesh = generate_voronoi(12, 2, 3);
  const StudyRow row = solve_on_mesh(tiny_config(), MeshFamily::Voro, 7, 1e-3, mesh);
  EXPECT_EQ(row.family, MeshFamily::Voro);
  EXPECT_EQ(row.level, 7);
  EXPECT_EQ(row.eps, 1e-3);
  EXPECT_EQ(row.h, mesh.h);
  EXPECT_GT(row.n_dofs, 0);
  EXPECT_GT(row.e_h1, 0.0);
  EXPECT_GT(row.e_l2, 0.0);
  EXPECT_GT(row.e_cip, 0.0);
  EXPECT_GE(row.seconds, 0.0);
}

} // namespace
} // namespace vemcip
