#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hourglass/geometry.hpp"

namespace hg {

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// How a mesh came to be. Structured grids keep their (nx, ny, domain)
/// description so experiments can recover grid indices; perturbation records
/// its amplitude and seed on top.
struct MeshProvenance {
  std::string generator = "custom";  // "structured", "perturbed", "custom", "file"
  int nx = 0;
  int ny = 0;
  Rect domain;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};

/// Planar polygonal mesh: shared points, cells as CCW vertex-index loops, and
/// the ids of vertices on the domain boundary.
struct Mesh {
  std::vector<Point> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> boundary;  // sorted, unique
  MeshProvenance provenance;

  int num_points() const { return static_cast<int>(points.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }

  Polygon cell_polygon(int c) const;
  bool is_boundary(int vertex) const;
};

/// Throws GeometryError / InvalidArgumentError if indices are out of range or
/// any cell is not positively oriented.
void validate(const Mesh& m);

/// Uniform nx-by-ny grid of quads over `domain`. Points are numbered
/// row-major: id = j*(nx+1) + i.
Mesh make_structured_quad_mesh(int nx, int ny, const Rect& domain = Rect{});

/// Displaces interior points by a seeded deterministic offset, at most
/// `amplitude` times the local mesh size per coordinate. Boundary points stay
/// put. Offsets are shrunk where needed to keep every cell positively
/// oriented (and every quad cell strictly convex, so the isoparametric map
/// stays invertible).
Mesh perturb_mesh(const Mesh& m, double amplitude, std::uint64_t seed);

/// Mean cell diameter.
double mean_cell_size(const Mesh& m);

}  // namespace hg
