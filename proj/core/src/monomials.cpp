#include "vemcip/monomials.hpp"

#include <cmath>
#include <stdexcept>

namespace vemcip {

std::vector<std::array<int, 2>> monomial_exponents(int degree) {
  std::vector<std::array<int, 2>> exps;
  exps.reserve(poly_space_dim(degree));
  for (int d = 0; d <= degree; ++d)
    for (int ay = 0; ay <= d; ++ay) exps.push_back({d - ay, ay});
  return exps;
}

int monomial_index(int ax, int ay) {
  const int d = ax + ay;
  return d * (d + 1) / 2 + ay;
}

ScaledMonomialBasis2D::ScaledMonomialBasis2D(int degree, const Vec2& center, double hscale)
    : degree_(degree), center_(center), hscale_(hscale), exponents_(monomial_exponents(degree)) {
  if (degree < 0) throw std::invalid_argument("ScaledMonomialBasis2D: negative degree");
  if (!(hscale > 0.0)) throw std::invalid_argument("ScaledMonomialBasis2D: hscale must be positive");
}

Eigen::MatrixXd ScaledMonomialBasis2D::eval(const std::vector<Vec2>& points) const {
  const int np = static_cast<int>(points.size());
  const int nb = size();
  Eigen::MatrixXd values(np, nb);
  for (int p = 0; p < np; ++p) {
    const double x = (points[p].x() - center_.x()) / hscale_;
    const double y = (points[p].y() - center_.y()) / hscale_;
    // Powers up to the degree, then one table lookup per basis function.
    for (int b = 0; b < nb; ++b)
      values(p, b) = std::pow(x, exponents_[b][0]) * std::pow(y, exponents_[b][1]);
  }
  return values;
}

void ScaledMonomialBasis2D::eval_gradients(const std::vector<Vec2>& points, Eigen::MatrixXd& dx,
                                           Eigen::MatrixXd& dy) const {
  const int np = static_cast<int>(points.size());
  const int nb = size();
  dx.resize(np, nb);
  dy.resize(np, nb);
  for (int p = 0; p < np; ++p) {
    const double x = (points[p].x() - center_.x()) / hscale_;
    const double y = (points[p].y() - center_.y()) / hscale_;
    for (int b = 0; b < nb; ++b) {
      const int ax = exponents_[b][0], ay = exponents_[b][1];
      dx(p, b) = ax == 0 ? 0.0 : ax * std::pow(x, ax - 1) * std::pow(y, ay) / hscale_;
      dy(p, b) = ay == 0 ? 0.0 : ay * std::pow(x, ax) * std::pow(y, ay - 1) / hscale_;
    }
  }
}

std::vector<std::pair<int, double>> ScaledMonomialBasis2D::laplacian_coefficients(int a) const {
  const int ax = exponents_[a][0], ay = exponents_[a][1];
  std::vector<std::pair<int, double>> out;
  const double s = 1.0 / (hscale_ * hscale_);
  if (ax >= 2) out.emplace_back(monomial_index(ax - 2, ay), ax * (ax - 1) * s);
  if (ay >= 2) out.emplace_back(monomial_index(ax, ay - 2), ay * (ay - 1) * s);
  return out;
}

Eigen::MatrixXd ScaledMonomialBasis1D::eval(const std::vector<double>& tparams) const {
  const int np = static_cast<int>(tparams.size());
  Eigen::MatrixXd values(np, count_);
  for (int p = 0; p < np; ++p) {
    const double s = tparams[p] - 0.5;
    double pw = 1.0;
    for (int l = 0; l < count_; ++l) {
      values(p, l) = pw;
      pw *= s;
    }
  }
  return values;
}

Eigen::MatrixXd ScaledMonomialBasis1D::mass_matrix(double facet_length) const {
  // \int_e (s-1/2)^l (s-1/2)^m ds = h_e \int_{-1/2}^{1/2} t^{l+m} dt, zero for
  // odd l+m and h_e (1/2)^p / (p+1) for even p = l+m.
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(count_, count_);
  for (int l = 0; l < count_; ++l)
    for (int m = 0; m < count_; ++m) {
      const int p = l + m;
      if (p % 2 == 0) mass(l, m) = facet_length * std::pow(0.5, p) / (p + 1);
    }
  return mass;
}

Eigen::MatrixXd monomial_mass_matrix(const ScaledMonomialBasis2D& basis, const QuadratureRule& rule) {
  const Eigen::MatrixXd values = basis.eval(rule.points);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  return values.transpose() * w.asDiagonal() * values;
}

} // namespace vemcip
