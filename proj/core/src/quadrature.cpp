#include "vemcip/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "vemcip/geometry.hpp"

namespace vemcip {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on the Legendre polynomial from a Chebyshev-like initial
  // guess; symmetric, so only the lower half is computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Three-term recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

namespace {

// Rule on the reference triangle {(u,v): u,v >= 0, u+v <= 1} exact for total
// degree d, built by the Duffy collapse x=u, y=v(1-u) of a tensor
// Gauss-Legendre grid. The Jacobian (1-u) raises the u-degree by one, hence
// the asymmetric point counts.
void reference_triangle_rule(int d, std::vector<Vec2>& pts, std::vector<double>& wts) {
  const int nu = (d + 2 + 1) / 2; // ceil((d+2)/2)
  const int nv = (d + 1 + 1) / 2; // ceil((d+1)/2)
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  pts.clear();
  wts.clear();
  pts.reserve(nu * nv);
  wts.reserve(nu * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      pts.emplace_back(u, v * (1.0 - u));
      wts.push_back(0.25 * wu[i] * wv[j] * (1.0 - u));
    }
  }
}

void append_triangle(QuadratureRule& rule, const Vec2& a, const Vec2& b, const Vec2& c,
                     const std::vector<Vec2>& ref_pts, const std::vector<double>& ref_wts) {
  const double jac = cross2(b - a, c - a); // = 2*area for CCW triangles
  for (std::size_t q = 0; q < ref_pts.size(); ++q) {
    rule.points.push_back(a + ref_pts[q].x() * (b - a) + ref_pts[q].y() * (c - a));
    rule.weights.push_back(jac * ref_wts[q]);
  }
}

} // namespace

QuadratureRule polygon_quadrature(const std::vector<Vec2>& loop, int exactness) {
  if (loop.size() < 3) throw std::invalid_argument("polygon_quadrature: fewer than 3 vertices");
  QuadratureRule rule;
  rule.exactness = exactness;

  std::vector<Vec2> ref_pts;
  std::vector<double> ref_wts;
  reference_triangle_rule(std::max(exactness, 0), ref_pts, ref_wts);

  const Vec2 c = polygon_centroid(loop);
  if (polygon_star_shaped_from(loop, c)) {
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) append_triangle(rule, c, loop[i], loop[(i + 1) % n], ref_pts, ref_wts);
  } else {
    for (const auto& t : ear_clip_triangulate(loop))
      append_triangle(rule, loop[t[0]], loop[t[1]], loop[t[2]], ref_pts, ref_wts);
  }
  return rule;
}

QuadratureRule polygon_quadrature(const PolyMesh& mesh, int cell, int exactness) {
  return polygon_quadrature(mesh.cell_loop(cell), exactness);
}

QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int exactness) {
  const int n = std::max(1, (exactness + 2) / 2); // 2n-1 >= exactness
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.exactness = 2 * n - 1;
  const double len = (b - a).norm();
  rule.points.reserve(n);
  for (int q = 0; q < n; ++q) {
    const double t = 0.5 * (x[q] + 1.0);
    rule.points.push_back(a + t * (b - a));
    rule.weights.push_back(0.5 * w[q] * len);
    rule.param.push_back(t);
  }
  return rule;
}

QuadratureRule facet_quadrature(const FacetRecord& facet, const PolyMesh& mesh, int exactness) {
  return segment_quadrature(mesh.vertices[facet.v0], mesh.vertices[facet.v1], exactness);
}

} // namespace vemcip
