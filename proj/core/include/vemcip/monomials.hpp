// Scaled monomial bases m_a(x) = ((x - x_E)/h_E)^a on elements and
// ((s - s_e)/h_e)^l on facets, with evaluation, differentiation and
// mass matrices.

#ifndef VEMCIP_MONOMIALS_HPP
#define VEMCIP_MONOMIALS_HPP

#include <array>
#include <vector>

#include "vemcip/quadrature.hpp"

namespace vemcip {

/// dim P_k in two variables.
inline int poly_space_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Graded-lex multi-index order: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<std::array<int, 2>> monomial_exponents(int degree);

/// Position of exponent pair a in the graded-lex order.
int monomial_index(int ax, int ay);

class ScaledMonomialBasis2D {
public:
  ScaledMonomialBasis2D(int degree, const Vec2& center, double hscale);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const Vec2& center() const { return center_; }
  double hscale() const { return hscale_; }
  const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }

  /// Values table, rows = points, cols = basis functions.
  Eigen::MatrixXd eval(const std::vector<Vec2>& points) const;
  /// x/y derivative tables of the same shape; gradient of m_0 is exactly zero.
  void eval_gradients(const std::vector<Vec2>& points, Eigen::MatrixXd& dx, Eigen::MatrixXd& dy) const;

  /// Expansion of the Laplacian of m_a in this basis (entries of degree |a|-2).
  /// Returns (index, coefficient) pairs; empty for |a| < 2.
  std::vector<std::pair<int, double>> laplacian_coefficients(int a) const;

private:
  int degree_;
  Vec2 center_;
  double hscale_;
  std::vector<std::array<int, 2>> exponents_;
};

/// Facet basis in the arc-length parameter t in [0,1] of the stored endpoint
/// order: (s - s_e)/h_e = t - 1/2.
class ScaledMonomialBasis1D {
public:
  explicit ScaledMonomialBasis1D(int count) : count_(count) {}

  int size() const { return count_; }

  Eigen::MatrixXd eval(const std::vector<double>& tparams) const;

  /// Exact mass matrix \int_e b_l b_m ds for a facet of length h_e.
  Eigen::MatrixXd mass_matrix(double facet_length) const;

private:
  int count_;
};

/// H with H_{ab} = \int_E m_a m_b, SPD, computed with a rule of exactness >= 2k.
Eigen::MatrixXd monomial_mass_matrix(const ScaledMonomialBasis2D& basis, const QuadratureRule& rule);

} // namespace vemcip

#endif
