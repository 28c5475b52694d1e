#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "vemcip/mesh.hpp"

namespace vemcip {

namespace {

// Uniform double in [0,1) from the top 53 bits of the engine output,
// independent of the standard library's distribution implementation so that
// generated meshes are bit-identical across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform point in the disc of the given radius (polar sampling).
Vec2 disc_sample(std::mt19937_64& rng, double radius) {
  const double r = radius * std::sqrt(uniform01(rng));
  const double phi = 2.0 * M_PI * uniform01(rng);
  return {r * std::cos(phi), r * std::sin(phi)};
}

bool on_unit_square_boundary(const Vec2& p) {
  return p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
}

bool is_unit_square_corner(const Vec2& p) {
  return (p.x() == 0.0 || p.x() == 1.0) && (p.y() == 0.0 || p.y() == 1.0);
}

} // namespace

PolyMesh generate_octag(int n, double perturb, std::uint64_t seed) {
  if (n < 1) throw MeshError("generate_octag: n must be positive");
  if (perturb < 0.0 || perturb >= 0.5)
    throw MeshError("generate_octag: perturb must lie in [0, 0.5)");

  std::mt19937_64 rng(seed);
  const double hgrid = 1.0 / n;
  const double radius = perturb * hgrid;

  for (int attempt = 0; attempt < 100; ++attempt) {
    // Grid nodes a(i,j) = ((i+j*(n+1)) at (i/n, j/n)), perturbed in a disc of
    // radius perturb/n. Boundary nodes move only tangentially, corners not at
    // all, so the domain stays exactly [0,1]^2.
    std::vector<Vec2> pts((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        Vec2 p(i * hgrid, j * hgrid);
        const Vec2 d = disc_sample(rng, radius); // always drawn: keeps the RNG stream fixed
        if (!is_unit_square_corner(p)) {
          if (p.x() == 0.0 || p.x() == 1.0)
            p.y() += d.y();
          else if (p.y() == 0.0 || p.y() == 1.0)
            p.x() += d.x();
          else
            p += d;
        }
        pts[i + j * (n + 1)] = p;
      }

    // Each grid square [i,i+1]x[j,j+1] with corners a,b,c,d (CCW from
    // bottom-left) is cut along the diagonal a-c; the diagonal midpoint m
    // turns both triangles into quadrilaterals a-b-c-m and a-m-c-d.
    std::vector<Vec2> vertices = pts;
    std::vector<std::vector<int>> quads;
    quads.reserve(2 * n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int a = i + j * (n + 1);
        const int b = (i + 1) + j * (n + 1);
        const int c = (i + 1) + (j + 1) * (n + 1);
        const int d = i + (j + 1) * (n + 1);
        const int m = static_cast<int>(vertices.size());
        vertices.push_back(0.5 * (vertices[a] + vertices[c]));
        quads.push_back({a, b, c, m});
        quads.push_back({a, m, c, d});
      }

    // Insert the midpoint of every edge, shared between the two incident
    // cells, turning each quadrilateral into a degenerate octagon.
    std::map<std::pair<int, int>, int> midpoint_of;
    auto midpoint = [&](int u, int v) {
      const auto key = std::minmax(u, v);
      auto it = midpoint_of.find(key);
      if (it != midpoint_of.end()) return it->second;
      const int id = static_cast<int>(vertices.size());
      vertices.push_back(0.5 * (vertices[u] + vertices[v]));
      midpoint_of.emplace(key, id);
      return id;
    };
    std::vector<std::vector<int>> cells;
    cells.reserve(quads.size());
    for (const auto& q : quads) {
      std::vector<int> cell;
      cell.reserve(2 * q.size());
      for (std::size_t e = 0; e < q.size(); ++e) {
        const int u = q[e], v = q[(e + 1) % q.size()];
        cell.push_back(u);
        cell.push_back(midpoint(u, v));
      }
      cells.push_back(std::move(cell));
    }

    // A too-aggressive perturbation can invert or self-intersect a cell;
    // reject the sample and redraw.
    bool valid = true;
    for (const auto& cell : cells) {
      std::vector<Vec2> loop;
      loop.reserve(cell.size());
      for (int v : cell) loop.push_back(vertices[v]);
      if (polygon_signed_area(loop) <= 0.0 || !polygon_is_simple(loop)) {
        valid = false;
        break;
      }
    }
    if (valid) return build_topology(std::move(vertices), std::move(cells));
  }
  throw MeshError("generate_octag: no valid mesh after 100 attempts; lower perturb");
}

namespace {

// Clip a convex polygon by the half plane {x : n.x <= c} (Sutherland-Hodgman).
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& normal, double c) {
  std::vector<Vec2> out;
  const int n = static_cast<int>(poly.size());
  out.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = normal.dot(a) - c;
    const double db = normal.dot(b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0))
      out.push_back(a + (da / (da - db)) * (b - a));
  }
  return out;
}

// Voronoi cell of seeds[i] within [0,1]^2 by successive half-plane clipping
// against the other seeds. Seeds are visited nearest-first so clipping can
// stop once no further seed can cut the current cell.
std::vector<Vec2> voronoi_cell(const std::vector<Vec2>& seeds, int i,
                               const std::vector<int>& by_distance) {
  std::vector<Vec2> cell = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  const Vec2 p = seeds[i];
  for (int j : by_distance) {
    if (j == i) continue;
    if (cell.size() < 3) break;
    // Radius of the smallest circle about p containing the cell.
    double R2 = 0.0;
    for (const auto& v : cell) R2 = std::max(R2, (v - p).squaredNorm());
    const double d2 = (seeds[j] - p).squaredNorm();
    if (d2 > 4.0 * R2) break; // bisector of any farther seed misses the cell
    const Vec2 normal = seeds[j] - p;
    const double c = normal.dot(0.5 * (p + seeds[j]));
    cell = clip_half_plane(cell, normal, c);
  }
  if (cell.size() < 3) throw MeshError("voronoi_from_seeds: empty cell (duplicate seeds?)");
  return cell;
}

} // namespace

PolyMesh voronoi_from_seeds(std::vector<Vec2> seeds, int lloyd_iters) {
  const int nc = static_cast<int>(seeds.size());
  if (nc < 1) throw MeshError("voronoi_from_seeds: no seeds");
  for (const auto& s : seeds)
    if (s.x() < 0.0 || s.x() > 1.0 || s.y() < 0.0 || s.y() > 1.0)
      throw MeshError("voronoi_from_seeds: seed outside [0,1]^2");

  std::vector<std::vector<Vec2>> polys(nc);
  std::vector<std::pair<double, int>> order(nc);
  for (int sweep = 0; sweep <= lloyd_iters; ++sweep) {
    // Distance ordering is recomputed per seed; O(n^2 log n) overall, fine
    // for the mesh sizes used here.
    std::vector<int> by_distance(nc);
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < nc; ++j) order[j] = {(seeds[j] - seeds[i]).squaredNorm(), j};
      std::sort(order.begin(), order.end());
      for (int j = 0; j < nc; ++j) by_distance[j] = order[j].second;
      polys[i] = voronoi_cell(seeds, i, by_distance);
    }
    if (sweep == lloyd_iters) break;
    for (int i = 0; i < nc; ++i) seeds[i] = polygon_centroid(polys[i]);
  }

  // Snap near-coincident cell corners to shared vertex indices. Clipping
  // reproduces each Voronoi vertex independently per incident cell, so the
  // copies agree only up to roundoff; quantizing to a fine grid merges them.
  const double snap = 1e-9;
  std::map<std::pair<long long, long long>, int> vertex_of;
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells(nc);
  auto vertex_id = [&](const Vec2& p) {
    const auto key = std::make_pair(static_cast<long long>(std::llround(p.x() / snap)),
                                    static_cast<long long>(std::llround(p.y() / snap)));
    auto it = vertex_of.find(key);
    if (it != vertex_of.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(p);
    vertex_of.emplace(key, id);
    return id;
  };
  for (int i = 0; i < nc; ++i) {
    for (const auto& p : polys[i]) {
      const int v = vertex_id(p);
      // Clipping can leave two corners within snapping distance; collapse them.
      if (cells[i].empty() || (cells[i].back() != v && cells[i].front() != v)) cells[i].push_back(v);
    }
    if (cells[i].size() < 3) throw MeshError("voronoi_from_seeds: degenerate cell after snapping");
  }
  return build_topology(std::move(vertices), std::move(cells));
}

PolyMesh generate_voronoi(int n_cells, int lloyd_iters, std::uint64_t seed) {
  if (n_cells < 1) throw MeshError("generate_voronoi: n_cells must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Vec2> seeds(n_cells);
  for (auto& s : seeds) {
    const double x = uniform01(rng);
    const double y = uniform01(rng);
    s = {x, y};
  }
  // Duplicate or near-duplicate seeds collapse Voronoi cells; jitter offenders.
  const double min_sep = 1e-6 / std::sqrt(static_cast<double>(n_cells));
  for (int pass = 0; pass < 10; ++pass) {
    bool ok = true;
    for (int i = 0; i < n_cells && ok; ++i)
      for (int j = i + 1; j < n_cells; ++j)
        if ((seeds[i] - seeds[j]).norm() < min_sep) {
          seeds[j] = {uniform01(rng), uniform01(rng)};
          ok = false;
          break;
        }
    if (ok) break;
  }
  return voronoi_from_seeds(std::move(seeds), lloyd_iters);
}

} // namespace vemcip
