// Planar polygon primitives shared by the mesh and quadrature layers.

#ifndef VEMCIP_GEOMETRY_HPP
#define VEMCIP_GEOMETRY_HPP

#include <array>
#include <Eigen/Dense>
#include <vector>

namespace vemcip {

using Vec2 = Eigen::Vector2d;

/// z-component of the cross product (a x b).
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Signed area of a polygon given as an ordered vertex loop (positive if counterclockwise).
double polygon_signed_area(const std::vector<Vec2>& loop);

/// Area centroid of a simple polygon.
Vec2 polygon_centroid(const std::vector<Vec2>& loop);

/// Diameter: largest pairwise vertex distance.
double polygon_diameter(const std::vector<Vec2>& loop);

/// True if no two non-adjacent edges intersect and no edge degenerates to a point.
bool polygon_is_simple(const std::vector<Vec2>& loop);

/// True if every edge is seen from the given point with positive orientation,
/// i.e. the polygon is star-shaped with respect to that point. Loop must be CCW.
bool polygon_star_shaped_from(const std::vector<Vec2>& loop, const Vec2& p, double tol = 0.0);

/// Distance from a point to the polygon boundary (min over edges).
double distance_to_boundary(const std::vector<Vec2>& loop, const Vec2& p);

/// Ear-clipping triangulation of a simple polygon; returns vertex-index triples.
std::vector<std::array<int, 3>> ear_clip_triangulate(const std::vector<Vec2>& loop);

} // namespace vemcip

#endif
