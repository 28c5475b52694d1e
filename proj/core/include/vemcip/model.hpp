// Problem coefficients for -eps Laplace(u) + beta . grad(u) + sigma u = f.

#ifndef VEMCIP_MODEL_HPP
#define VEMCIP_MODEL_HPP

#include <functional>
#include <stdexcept>

#include "vemcip/geometry.hpp"

namespace vemcip {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

struct ModelParams {
  double eps = 1.0;     ///< diffusion, positive
  double sigma = 1.0;   ///< reaction, positive
  double delta = 0.1;   ///< Nitsche penalty scale
  double kappa_e = 0.025; ///< facet jump-penalty constant
  double kappa_E = 0.025; ///< element jump-penalty constant
  int k = 1;            ///< order
  VectorField beta;     ///< divergence-free advection field

  void validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("ModelParams: eps must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("ModelParams: sigma must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("ModelParams: delta must be positive");
    if (kappa_e < 0.0 || kappa_E < 0.0) throw std::invalid_argument("ModelParams: kappa must be nonnegative");
    if (!beta) throw std::invalid_argument("ModelParams: beta sampler not set");
  }

  /// Quadrature exactness used for every form integral.
  int quad_exactness() const { return 2 * k + 2; }
};

} // namespace vemcip

#endif
