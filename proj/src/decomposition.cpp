#include "hourglass/decomposition.hpp"

#include <cmath>

#include "hourglass/errors.hpp"

namespace hg {

DiffusionTensor::DiffusionTensor(double k11, double k12, double k22)
    : k11_(k11), k12_(k12), k22_(k22) {
  if (!std::isfinite(k11) || !std::isfinite(k12) || !std::isfinite(k22)) {
    throw InvalidArgumentError("diffusion tensor entries must be finite");
  }
  if (k11 <= 0.0 || k11 * k22 - k12 * k12 <= 0.0) {
    throw InvalidArgumentError("diffusion tensor must be positive definite");
  }
}

Eigen::Matrix2d DiffusionTensor::matrix() const {
  Eigen::Matrix2d k;
  k << k11_, k12_, k12_, k22_;
  return k;
}

std::array<Vec2, 4> diagonals(const Quad& q) {
  std::array<Vec2, 4> d;
  for (int i = 0; i < 4; ++i) d[i] = q.vertex(i + 1) - q.vertex(i - 1);
  return d;
}

Eigen::MatrixXd consistency_matrix(const Polygon& p, const DiffusionTensor& kappa) {
  const int n = p.size();
  std::vector<Vec2> dperp(n);
  for (int i = 0; i < n; ++i) dperp[i] = rotate_cw(p.vertex(i + 1) - p.vertex(i - 1));

  Eigen::MatrixXd A(n, n);
  const double scale = 1.0 / (4.0 * p.area());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = scale * dot(kappa.apply(dperp[j]), dperp[i]);
      A(i, j) = v;
      A(j, i) = v;
    }
  }
  return A;
}

std::array<double, 4> signed_triangle_areas(const Quad& q) {
  // T_i = signed area of the triangle left after dropping V_i, with the
  // remaining vertices kept in cyclic order.
  auto tri = [&](int a, int b, int c) {
    return 0.5 * cross(q.vertex(b) - q.vertex(a), q.vertex(c) - q.vertex(a));
  };
  return {tri(1, 2, 3), tri(0, 2, 3), tri(0, 1, 3), tri(0, 1, 2)};
}

Eigen::Vector4d gamma_vector(const Quad& q) {
  const auto T = signed_triangle_areas(q);
  Eigen::Vector4d g;
  // Vertex labels are 1-based in the construction: slot k holds (-1)^(k+1) T_k / |Q|.
  for (int k = 0; k < 4; ++k) g(k) = ((k % 2 == 0) ? -1.0 : 1.0) * T[k] / q.area();
  return g;
}

Eigen::Matrix4d stability_basis_matrix(const Quad& q) {
  Eigen::Vector4d g = gamma_vector(q);
  return g * g.transpose();
}

GBCExpansion gbc_expansion(const Quad& q) {
  const double area = q.area();
  const auto d = diagonals(q);
  const auto T = signed_triangle_areas(q);

  GBCExpansion e;
  for (int k = 0; k < 4; ++k) {
    const Point& prev = q.vertex(k - 1);
    const Point& next = q.vertex(k + 1);
    e.a[k] = (T[k] + (next.x * prev.y - prev.x * next.y)) / (2.0 * area);
    e.b[k] = d[k].y / (2.0 * area);
    e.c[k] = -d[k].x / (2.0 * area);
    e.hourglass[k] = ((k % 2 == 0) ? -1.0 : 1.0) * T[k] / area;
  }
  return e;
}

Eigen::Matrix4d element_stiffness(const Quad& q, const DiffusionTensor& kappa, double tau) {
  if (tau < 0.0) throw InvalidArgumentError("tau must be nonnegative");
  Eigen::Matrix4d A = consistency_matrix(q.as_polygon(), kappa);
  return A + tau * stability_basis_matrix(q);
}

ElementDecomposition decompose(const Quad& q, const DiffusionTensor& kappa) {
  ElementDecomposition d;
  d.A = consistency_matrix(q.as_polygon(), kappa);
  d.gamma = gamma_vector(q);
  d.B = d.gamma * d.gamma.transpose();
  d.area = q.area();
  d.C = d.A.topLeftCorner<2, 2>();
  return d;
}

}  // namespace hg
