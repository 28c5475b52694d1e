// Quadrature on polygons and straight facets, exact to a requested degree.

#ifndef VEMCIP_QUADRATURE_HPP
#define VEMCIP_QUADRATURE_HPP

#include <vector>

#include "vemcip/mesh.hpp"

namespace vemcip {

/// Positive-weight rule. For facet rules `param` holds the arc-length
/// parameter t in [0,1] of each point along the stored endpoint order and
/// weights include the length Jacobian (sum = h_e); for cell rules `param`
/// is empty and weights sum to |E|.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<double> param;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre nodes/weights on [-1,1], exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule exact for all bivariate polynomials of total degree <= exactness.
/// Fan-triangulates from the centroid; falls back to ear clipping when the
/// polygon is not star-shaped from its centroid.
QuadratureRule polygon_quadrature(const std::vector<Vec2>& loop, int exactness);
QuadratureRule polygon_quadrature(const PolyMesh& mesh, int cell, int exactness);

/// Mapped Gauss-Legendre rule on the facet, exact for degree <= exactness.
QuadratureRule facet_quadrature(const FacetRecord& facet, const PolyMesh& mesh, int exactness);
QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int exactness);

} // namespace vemcip

#endif
