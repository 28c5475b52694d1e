#include "vemcip/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vemcip {

double polygon_signed_area(const std::vector<Vec2>& loop) {
  const int n = static_cast<int>(loop.size());
  double twice = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    twice += cross2(a, b);
  }
  return 0.5 * twice;
}

Vec2 polygon_centroid(const std::vector<Vec2>& loop) {
  const int n = static_cast<int>(loop.size());
  double twice = 0.0;
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    const double w = cross2(a, b);
    twice += w;
    c += w * (a + b);
  }
  if (twice == 0.0) throw std::invalid_argument("polygon_centroid: degenerate polygon");
  return c / (3.0 * twice);
}

double polygon_diameter(const std::vector<Vec2>& loop) {
  const int n = static_cast<int>(loop.size());
  double d2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d2 = std::max(d2, (loop[i] - loop[j]).squaredNorm());
  return std::sqrt(d2);
}

namespace {

// Proper or touching intersection of segments [a,b] and [c,d].
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross2(d - c, a - c);
  const double d2 = cross2(d - c, b - c);
  const double d3 = cross2(b - a, c - a);
  const double d4 = cross2(b - a, d - a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
           std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
  };
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

} // namespace

bool polygon_is_simple(const std::vector<Vec2>& loop) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i)
    if ((loop[(i + 1) % n] - loop[i]).squaredNorm() == 0.0) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share exactly one endpoint by construction).
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(loop[i], loop[(i + 1) % n], loop[j], loop[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

bool polygon_star_shaped_from(const std::vector<Vec2>& loop, const Vec2& p, double tol) {
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    if (cross2(b - a, p - a) <= tol) return false; // p must lie strictly left of every edge
  }
  return true;
}

double distance_to_boundary(const std::vector<Vec2>& loop, const Vec2& p) {
  const int n = static_cast<int>(loop.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = loop[i];
    const Vec2& b = loop[(i + 1) % n];
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (p - (a + t * ab)).norm());
  }
  return best;
}

std::vector<std::array<int, 3>> ear_clip_triangulate(const std::vector<Vec2>& loop) {
  const int n = static_cast<int>(loop.size());
  if (n < 3) throw std::invalid_argument("ear_clip_triangulate: fewer than 3 vertices");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (polygon_signed_area(loop) < 0) throw std::invalid_argument("ear_clip_triangulate: loop must be CCW");

  auto in_triangle = [](const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    const double w0 = cross2(b - a, p - a);
    const double w1 = cross2(c - b, p - b);
    const double w2 = cross2(a - c, p - c);
    return w0 >= 0 && w1 >= 0 && w2 >= 0;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(n - 2);
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int i = 0; i < m; ++i) {
      const int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      const Vec2 &a = loop[ia], &b = loop[ib], &c = loop[ic];
      if (cross2(b - a, c - a) <= 0) continue; // reflex or collinear corner
      bool ear = true;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (in_triangle(a, b, c, loop[j])) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("ear_clip_triangulate: no ear found (non-simple polygon?)");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

} // namespace vemcip
