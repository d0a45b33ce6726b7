#include "hourglass/projector.hpp"

#include "hourglass/errors.hpp"

namespace hg {

Point vertex_center(const Polygon& p) {
  Vec2 sum{0.0, 0.0};
  for (const Point& v : p.vertices()) sum += v;
  return sum / static_cast<double>(p.size());
}

Point boundary_centroid(const Polygon& p) {
  const EdgeData ed = edge_data(p);
  const double per = perimeter(p);
  if (per <= 0.0) throw GeometryError("zero perimeter");
  const int n = p.size();
  Vec2 sum{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    double w = 0.5 * (ed.length[(i + n - 1) % n] + ed.length[i]);
    sum += w * p.vertex(i);
  }
  return sum / per;
}

namespace {

// Constant projection of the boundary trace (piecewise linear between vertex
// dofs) under the given choice.
double p0_of_values(const Polygon& p, std::span<const double> values, P0Choice choice) {
  const int n = p.size();
  if (choice == P0Choice::VertexMean) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / n;
  }
  const EdgeData ed = edge_data(p);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = 0.5 * (ed.length[(i + n - 1) % n] + ed.length[i]);
    s += w * values[i];
  }
  return s / perimeter(p);
}

Point p0_of_position(const Polygon& p, P0Choice choice) {
  return choice == P0Choice::VertexMean ? vertex_center(p) : boundary_centroid(p);
}

}  // namespace

LinearPolynomial project_nodal_function(const Polygon& p, std::span<const double> nodal_values,
                                        P0Choice choice) {
  const int n = p.size();
  if (static_cast<int>(nodal_values.size()) != n) {
    throw InvalidArgumentError("nodal value count must match vertex count");
  }
  // Mean gradient from the boundary trace: (1 / 2|P|) sum_i v_i d_i^perp.
  Vec2 g{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    g += nodal_values[i] * rotate_cw(p.vertex(i + 1) - p.vertex(i - 1));
  }
  g = g / (2.0 * p.area());

  const Point x0 = p0_of_position(p, choice);
  const double c0 = p0_of_values(p, nodal_values, choice);

  LinearPolynomial q;
  q.b = g.x;
  q.c = g.y;
  q.a = c0 - dot(g, x0);
  return q;
}

LinearPolynomial project_basis_function(const Polygon& p, int i, P0Choice choice) {
  const int n = p.size();
  if (i < 0 || i >= n) throw InvalidArgumentError("vertex index out of range");
  std::vector<double> e(n, 0.0);
  e[i] = 1.0;
  return project_nodal_function(p, e, choice);
}

Eigen::MatrixXd residual_dofs(const Polygon& p, P0Choice choice) {
  const int n = p.size();
  const Point x0 = p0_of_position(p, choice);
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    // Evaluate the projection in the frame centered at P0 x; the offsets
    // V_k - x0 are element-sized, so large global coordinates do not leak
    // roundoff into the residual.
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    const Vec2 g = rotate_cw(p.vertex(i + 1) - p.vertex(i - 1)) / (2.0 * p.area());
    const double c0 = p0_of_values(p, e, choice);
    for (int k = 0; k < n; ++k) {
      D(k, i) = (k == i ? 1.0 : 0.0) - (dot(g, p.vertex(k) - x0) + c0);
    }
  }
  return D;
}

}  // namespace hg
