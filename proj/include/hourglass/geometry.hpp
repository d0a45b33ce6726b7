#pragma once

#include <array>
#include <span>
#include <vector>

namespace hg {

/// 2D point / vector. Used for both positions and displacements.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

using Point = Vec2;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }
inline Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 v);
bool is_finite(Vec2 v);

/// Clockwise rotation by 90 degrees: (x, y) -> (y, -x).
inline Vec2 rotate_cw(Vec2 v) { return {v.y, -v.x}; }

/// Shoelace area of a closed vertex loop; positive for counter-clockwise loops.
double signed_area(std::span<const Point> loop);

/// Simple planar polygon with at least 3 vertices, stored counter-clockwise.
/// Input loops given clockwise are reversed on construction and the fact is
/// recorded in `reversed_on_input()`.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices);

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Point>& vertices() const { return vertices_; }

  /// Cyclic vertex access: any integer index is reduced modulo size().
  const Point& vertex(int i) const;

  /// Positive area of the normalized (CCW) polygon.
  double area() const { return area_; }

  bool reversed_on_input() const { return reversed_; }

 private:
  std::vector<Point> vertices_;
  double area_ = 0.0;
  bool reversed_ = false;
};

/// Quadrilateral, stored counter-clockwise. Convexity is recorded but not
/// required; the stiffness decomposition holds for nonconvex quads too.
class Quad {
 public:
  Quad(Point v1, Point v2, Point v3, Point v4);
  explicit Quad(const std::array<Point, 4>& vertices);
  explicit Quad(const Polygon& p);

  const std::array<Point, 4>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[((i % 4) + 4) % 4]; }

  double area() const { return area_; }
  bool is_convex() const { return convex_; }
  bool reversed_on_input() const { return reversed_; }

  Polygon as_polygon() const;

 private:
  void init();

  std::array<Point, 4> vertices_;
  double area_ = 0.0;
  bool convex_ = false;
  bool reversed_ = false;
};

/// Per-edge geometry of a polygon: edge vectors e_i = V_{i+1} - V_i, their
/// lengths, and outward unit normals.
struct EdgeData {
  std::vector<Vec2> edge;
  std::vector<Vec2> normal;
  std::vector<double> length;
};

EdgeData edge_data(const Polygon& p);

/// Perimeter of the polygon.
double perimeter(const Polygon& p);

/// Area centroid (center of mass) of the polygon.
Point centroid(const Polygon& p);

/// Largest vertex-to-vertex distance.
double diameter(const Polygon& p);

}  // namespace hg
