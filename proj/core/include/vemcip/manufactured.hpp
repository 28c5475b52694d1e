// Closed-form verification problems on the unit square.

#ifndef VEMCIP_MANUFACTURED_HPP
#define VEMCIP_MANUFACTURED_HPP

#include <string>

#include "vemcip/model.hpp"

namespace vemcip {

/// Exact solution bundle: u with an internal layer ("u1") or boundary layer
/// ("u2"), the rotational advection field, and the data f, g derived
/// compositionally from the closed-form derivatives.
struct ManufacturedProblem {
  std::string name;
  ScalarField u;
  VectorField grad_u;
  ScalarField laplacian_u;
  VectorField beta;
  std::function<Eigen::Matrix2d(const Vec2&)> beta_jacobian;
  double beta_max = 0.0; ///< sup-norm of |beta| over the domain
  double sigma = 1.0;
  double eps = 1.0;
  ScalarField f; ///< -eps lap(u) + beta . grad(u) + sigma u
  ScalarField g; ///< trace of u
};

/// Known names: "u1", "u2". Throws std::invalid_argument otherwise.
ManufacturedProblem manufactured(const std::string& name, double eps, double sigma = 1.0);

/// Model parameters matching a manufactured problem.
ModelParams params_for(const ManufacturedProblem& problem, int k, double delta = 0.1,
                       double kappa_e = 0.025, double kappa_E = 0.025);

} // namespace vemcip

#endif
