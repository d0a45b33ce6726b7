#include "hourglass/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hourglass/errors.hpp"

namespace hg {

Polygon Mesh::cell_polygon(int c) const {
  const auto& cell = cells.at(c);
  std::vector<Point> verts;
  verts.reserve(cell.size());
  for (int id : cell) verts.push_back(points.at(id));
  return Polygon(std::move(verts));
}

bool Mesh::is_boundary(int vertex) const {
  return std::binary_search(boundary.begin(), boundary.end(), vertex);
}

void validate(const Mesh& m) {
  const int np = m.num_points();
  for (const Point& p : m.points) {
    if (!is_finite(p)) throw GeometryError("mesh point is not finite");
  }
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& cell = m.cells[c];
    if (cell.size() < 3) throw GeometryError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (int id : cell) {
      if (id < 0 || id >= np) {
        throw GeometryError("cell " + std::to_string(c) + " references invalid point " + std::to_string(id));
      }
    }
    std::vector<Point> loop;
    loop.reserve(cell.size());
    for (int id : cell) loop.push_back(m.points[id]);
    if (signed_area(loop) <= 0.0) {
      throw GeometryError("cell " + std::to_string(c) + " is not positively oriented");
    }
  }
  for (int id : m.boundary) {
    if (id < 0 || id >= np) throw GeometryError("boundary references invalid point " + std::to_string(id));
  }
  if (!std::is_sorted(m.boundary.begin(), m.boundary.end())) {
    throw GeometryError("boundary vertex list must be sorted");
  }
}

Mesh make_structured_quad_mesh(int nx, int ny, const Rect& domain) {
  if (nx < 1 || ny < 1) throw InvalidArgumentError("structured mesh needs nx, ny >= 1");
  if (domain.width() <= 0.0 || domain.height() <= 0.0) {
    throw InvalidArgumentError("structured mesh domain must have positive extent");
  }

  Mesh m;
  m.points.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.points.push_back({domain.x0 + i * dx, domain.y0 + j * dy});
      if (i == 0 || i == nx || j == 0 || j == ny) {
        m.boundary.push_back(j * (nx + 1) + i);
      }
    }
  }
  m.cells.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int v0 = j * (nx + 1) + i;
      int v1 = v0 + 1;
      int v2 = v1 + (nx + 1);
      int v3 = v0 + (nx + 1);
      m.cells.push_back({v0, v1, v2, v3});
    }
  }
  m.provenance.generator = "structured";
  m.provenance.nx = nx;
  m.provenance.ny = ny;
  m.provenance.domain = domain;
  return m;
}

namespace {

// Counter-based generator: a fixed (seed, node, draw) triple always yields the
// same value, independent of evaluation order.
std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t seed, std::uint64_t node, std::uint64_t draw) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(node * 0x9e3779b97f4a7c15ULL + draw));
  // 53 mantissa bits -> [0,1), then map to [-1,1).
  double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

bool cell_is_valid(const Mesh& m, const std::vector<int>& cell, const std::vector<Point>& pts,
                   double min_corner_area) {
  const int n = static_cast<int>(cell.size());
  std::vector<Point> loop(n);
  for (int i = 0; i < n; ++i) loop[i] = pts[cell[i]];
  double a = signed_area(loop);
  if (a <= 0.0) return false;
  if (n == 4) {
    // Keep quads strictly convex: every corner triangle must retain a
    // nontrivial positive area so det J > 0 over the whole cell.
    for (int i = 0; i < 4; ++i) {
      Vec2 u = loop[(i + 1) % 4] - loop[i];
      Vec2 v = loop[(i + 2) % 4] - loop[(i + 1) % 4];
      if (0.5 * cross(u, v) < min_corner_area * a) return false;
    }
  }
  (void)m;
  return true;
}

}  // namespace

Mesh perturb_mesh(const Mesh& m, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude >= 0.5) {
    throw InvalidArgumentError("perturbation amplitude must lie in [0, 0.5)");
  }
  validate(m);

  Mesh out = m;
  out.provenance.generator = (amplitude == 0.0) ? m.provenance.generator : "perturbed";
  out.provenance.amplitude = amplitude;
  out.provenance.seed = seed;
  if (amplitude == 0.0) return out;

  const int np = m.num_points();

  // Local mesh size per node: shortest incident cell edge.
  std::vector<double> local_h(np, std::numeric_limits<double>::max());
  for (const auto& cell : m.cells) {
    const int n = static_cast<int>(cell.size());
    for (int i = 0; i < n; ++i) {
      int a = cell[i];
      int b = cell[(i + 1) % n];
      double len = norm(m.points[b] - m.points[a]);
      local_h[a] = std::min(local_h[a], len);
      local_h[b] = std::min(local_h[b], len);
    }
  }

  std::vector<Vec2> offset(np, Vec2{0.0, 0.0});
  for (int v = 0; v < np; ++v) {
    if (m.is_boundary(v)) continue;
    offset[v] = {amplitude * local_h[v] * uniform_pm1(seed, v, 0),
                 amplitude * local_h[v] * uniform_pm1(seed, v, 1)};
  }

  std::vector<double> scale(np, 1.0);
  constexpr double kMinCornerArea = 0.02;  // fraction of cell area
  constexpr int kMaxRounds = 64;

  for (int round = 0; round < kMaxRounds; ++round) {
    for (int v = 0; v < np; ++v) out.points[v] = m.points[v] + scale[v] * offset[v];
    bool ok = true;
    for (const auto& cell : m.cells) {
      if (!cell_is_valid(out, cell, out.points, kMinCornerArea)) {
        ok = false;
        for (int id : cell) scale[id] *= 0.5;
      }
    }
    if (ok) return out;
    if (*std::min_element(scale.begin(), scale.end()) < 1e-9) break;
  }
  throw GeometryError("perturbation amplitude too large to preserve cell orientation");
}

double mean_cell_size(const Mesh& m) {
  if (m.num_cells() == 0) throw InvalidArgumentError("mesh has no cells");
  double sum = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) sum += diameter(m.cell_polygon(c));
  return sum / m.num_cells();
}

}  // namespace hg
