#include "vemcip/manufactured.hpp"

#include <cmath>

namespace vemcip {

namespace {

constexpr double kLayerWidth = 0.05;

// Rotational advection field shared by both tests: divergence-free with
// sup norm sqrt(5) pi.
Vec2 beta_field(const Vec2& p) {
  const double s = std::sin(M_PI * (p.x() + 2.0 * p.y()));
  return {-2.0 * M_PI * s, M_PI * s};
}

Eigen::Matrix2d beta_field_jacobian(const Vec2& p) {
  const double c = M_PI * M_PI * std::cos(M_PI * (p.x() + 2.0 * p.y()));
  Eigen::Matrix2d J;
  J << -2.0 * c, -4.0 * c, c, 2.0 * c;
  return J;
}

// Internal layer at x = 0.5: u = (1 - tanh((x-1/2)/w))/2.
void internal_layer(ManufacturedProblem& p) {
  const double w = kLayerWidth;
  p.u = [w](const Vec2& x) { return 0.5 * (1.0 - std::tanh((x.x() - 0.5) / w)); };
  p.grad_u = [w](const Vec2& x) {
    const double sech = 1.0 / std::cosh((x.x() - 0.5) / w);
    return Vec2(-0.5 * sech * sech / w, 0.0);
  };
  p.laplacian_u = [w](const Vec2& x) {
    const double t = (x.x() - 0.5) / w;
    const double sech = 1.0 / std::cosh(t);
    return sech * sech * std::tanh(t) / (w * w);
  };
}

// Boundary layer at x = 1: u = (y - y^2)(x - q(x)) with
// q(x) = (e^{(x-1)/w} - e^{-1/w}) / (1 - e^{-1/w}); u vanishes on the whole
// boundary.
void boundary_layer(ManufacturedProblem& p) {
  const double w = kLayerWidth;
  const double e0 = std::exp(-1.0 / w);
  const double scale = 1.0 / (1.0 - e0);
  auto q = [=](double x) { return (std::exp((x - 1.0) / w) - e0) * scale; };
  auto dq = [=](double x) { return std::exp((x - 1.0) / w) * scale / w; };
  auto ddq = [=](double x) { return std::exp((x - 1.0) / w) * scale / (w * w); };

  p.u = [=](const Vec2& x) { return (x.y() - x.y() * x.y()) * (x.x() - q(x.x())); };
  p.grad_u = [=](const Vec2& x) {
    return Vec2((x.y() - x.y() * x.y()) * (1.0 - dq(x.x())),
                (1.0 - 2.0 * x.y()) * (x.x() - q(x.x())));
  };
  p.laplacian_u = [=](const Vec2& x) {
    return -(x.y() - x.y() * x.y()) * ddq(x.x()) - 2.0 * (x.x() - q(x.x()));
  };
}

} // namespace

ManufacturedProblem manufactured(const std::string& name, double eps, double sigma) {
  if (!(eps > 0.0))
    throw std::invalid_argument("manufactured: diffusion eps must be positive, got " +
                                std::to_string(eps));
  if (!(sigma >= 0.0))
    throw std::invalid_argument("manufactured: reaction sigma must be nonnegative, got " +
                                std::to_string(sigma));
  ManufacturedProblem p;
  p.name = name;
  p.eps = eps;
  p.sigma = sigma;
  p.beta = beta_field;
  p.beta_jacobian = beta_field_jacobian;
  p.beta_max = std::sqrt(5.0) * M_PI;
  if (name == "u1")
    internal_layer(p);
  else if (name == "u2")
    boundary_layer(p);
  else
    throw std::invalid_argument("manufactured: unknown problem '" + name + "' (use u1 or u2)");

  p.f = [u = p.u, grad = p.grad_u, lap = p.laplacian_u, beta = p.beta, eps, sigma](const Vec2& x) {
    return -eps * lap(x) + beta(x).dot(grad(x)) + sigma * u(x);
  };
  p.g = p.u;
  return p;
}

ModelParams params_for(const ManufacturedProblem& problem, int k, double delta, double kappa_e,
                       double kappa_E) {
  ModelParams params;
  params.eps = problem.eps;
  params.sigma = problem.sigma;
  params.delta = delta;
  params.kappa_e = kappa_e;
  params.kappa_E = kappa_E;
  params.k = k;
  params.beta = problem.beta;
  params.validate();
  return params;
}

} // namespace vemcip
