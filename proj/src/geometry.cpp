#include "hourglass/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hourglass/errors.hpp"

namespace hg {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double norm(Vec2 v) { return std::hypot(v.x, v.y); }

bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

double signed_area(std::span<const Point> loop) {
  const int n = static_cast<int>(loop.size());
  double twice = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point& a = loop[i];
    const Point& b = loop[(i + 1) % n];
    twice += cross(a, b);
  }
  return 0.5 * twice;
}

namespace {

// Scale-aware degeneracy threshold: |area| must exceed eps * diameter^2.
bool area_is_degenerate(double area, std::span<const Point> loop) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    for (std::size_t j = i + 1; j < loop.size(); ++j) {
      Vec2 v = loop[j] - loop[i];
      d2 = std::max(d2, dot(v, v));
    }
  }
  return std::abs(area) <= 1e-14 * std::max(d2, 1e-300);
}

void check_loop(std::span<const Point> loop) {
  if (loop.size() < 3) {
    throw GeometryError("polygon needs at least 3 vertices");
  }
  double scale = 0.0;
  for (const Point& p : loop) {
    if (!is_finite(p)) throw GeometryError("polygon vertex is not finite");
    scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  }
  const int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    Vec2 e = loop[(i + 1) % n] - loop[i];
    if (norm(e) <= 1e-14 * std::max(scale, 1.0)) {
      throw GeometryError("repeated consecutive vertices (zero-length edge)");
    }
  }
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  check_loop(vertices_);
  double a = signed_area(vertices_);
  if (area_is_degenerate(a, vertices_)) {
    throw GeometryError("degenerate polygon: zero area");
  }
  if (a < 0.0) {
    std::reverse(vertices_.begin(), vertices_.end());
    a = -a;
    reversed_ = true;
  }
  area_ = a;
}

const Point& Polygon::vertex(int i) const {
  const int n = size();
  return vertices_[((i % n) + n) % n];
}

Quad::Quad(Point v1, Point v2, Point v3, Point v4) : vertices_{v1, v2, v3, v4} { init(); }

Quad::Quad(const std::array<Point, 4>& vertices) : vertices_(vertices) { init(); }

Quad::Quad(const Polygon& p) {
  if (p.size() != 4) throw GeometryError("quad requires exactly 4 vertices");
  std::copy(p.vertices().begin(), p.vertices().end(), vertices_.begin());
  init();
}

void Quad::init() {
  check_loop(vertices_);
  double a = signed_area(vertices_);
  if (area_is_degenerate(a, vertices_)) {
    throw GeometryError("degenerate quad: zero area");
  }
  if (a < 0.0) {
    std::reverse(vertices_.begin(), vertices_.end());
    a = -a;
    reversed_ = true;
  }
  area_ = a;
  // Convex iff every corner turns left (all triangle areas positive).
  convex_ = true;
  for (int i = 0; i < 4; ++i) {
    Vec2 u = vertices_[(i + 1) % 4] - vertices_[i];
    Vec2 v = vertices_[(i + 2) % 4] - vertices_[(i + 1) % 4];
    if (cross(u, v) <= 0.0) convex_ = false;
  }
}

Polygon Quad::as_polygon() const {
  return Polygon(std::vector<Point>(vertices_.begin(), vertices_.end()));
}

EdgeData edge_data(const Polygon& p) {
  const int n = p.size();
  EdgeData d;
  d.edge.resize(n);
  d.normal.resize(n);
  d.length.resize(n);
  for (int i = 0; i < n; ++i) {
    Vec2 e = p.vertex(i + 1) - p.vertex(i);
    double len = norm(e);
    if (len <= 0.0) throw GeometryError("zero-length edge");
    d.edge[i] = e;
    d.normal[i] = rotate_cw(e) / len;  // outward for CCW loops
    d.length[i] = len;
  }
  return d;
}

double perimeter(const Polygon& p) {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) s += norm(p.vertex(i + 1) - p.vertex(i));
  return s;
}

Point centroid(const Polygon& p) {
  double cx = 0.0, cy = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const Point& a = p.vertex(i);
    const Point& b = p.vertex(i + 1);
    double w = cross(a, b);
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  double inv = 1.0 / (6.0 * p.area());
  return {cx * inv, cy * inv};
}

double diameter(const Polygon& p) {
  double d = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    for (int j = i + 1; j < p.size(); ++j) {
      d = std::max(d, norm(p.vertex(j) - p.vertex(i)));
    }
  }
  return d;
}

}  // namespace hg
