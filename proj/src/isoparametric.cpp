#include "hourglass/isoparametric.hpp"

#include <cmath>

#include "hourglass/errors.hpp"

namespace hg {

namespace {

// Gauss-Legendre nodes on [-1,1] by Newton iteration on P_n. Symmetric,
// converges in a handful of steps, exact to machine precision.
void gauss_legendre_1d(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Recurrence for P_n(x) and P_n'(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Refresh P_{n-1} at the converged node for the weight formula.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;  // Newton seed starts near +1; store ascending
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    nodes[n / 2] = 0.0;
    // P_n'(0) via recurrence.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= n; ++k) {
      double p2 = (-(k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    // p0 now holds P_{n-1}(0); P_n'(0) = n * P_{n-1}(0) for odd n at x=0.
    double dp0 = n * p0;
    weights[n / 2] = 2.0 / (dp0 * dp0);
  }
}

}  // namespace

QuadratureRule QuadratureRule::gauss(int points_per_direction) {
  if (points_per_direction < 1 || points_per_direction > 6) {
    throw InvalidArgumentError("Gauss rule supports 1..6 points per direction");
  }
  std::vector<double> x, w;
  gauss_legendre_1d(points_per_direction, x, w);

  QuadratureRule rule;
  rule.n_ = points_per_direction;
  for (int j = 0; j < points_per_direction; ++j) {
    for (int i = 0; i < points_per_direction; ++i) {
      rule.points_.push_back({x[i], x[j]});
      rule.weights_.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

ShapeEval bilinear_shapes(double xi, double eta) {
  ShapeEval s;
  const double xm = 1.0 - xi, xp = 1.0 + xi;
  const double em = 1.0 - eta, ep = 1.0 + eta;
  s.value = {0.25 * xm * em, 0.25 * xp * em, 0.25 * xp * ep, 0.25 * xm * ep};
  s.grad = {Vec2{-0.25 * em, -0.25 * xm}, Vec2{0.25 * em, -0.25 * xp},
            Vec2{0.25 * ep, 0.25 * xp}, Vec2{-0.25 * ep, 0.25 * xm}};
  return s;
}

HourglassEval hourglass_shape(double xi, double eta) {
  return {-0.5 * xi * eta, Vec2{-0.5 * eta, -0.5 * xi}};
}

ReferenceMapEval map_at(const Quad& q, double xi, double eta) {
  const ShapeEval s = bilinear_shapes(xi, eta);
  ReferenceMapEval m;
  m.x = {0.0, 0.0};
  m.jacobian.setZero();
  for (int i = 0; i < 4; ++i) {
    const Point& v = q.vertices()[i];
    m.x += s.value[i] * v;
    m.jacobian(0, 0) += v.x * s.grad[i].x;
    m.jacobian(0, 1) += v.x * s.grad[i].y;
    m.jacobian(1, 0) += v.y * s.grad[i].x;
    m.jacobian(1, 1) += v.y * s.grad[i].y;
  }
  m.det = m.jacobian.determinant();
  return m;
}

namespace {

// Physical gradient from a reference gradient: J^{-T} g.
Vec2 physical_gradient(const Eigen::Matrix2d& J, double det, Vec2 g) {
  // J^{-1} = adj(J) / det; J^{-T} = adj(J)^T / det.
  const double inv = 1.0 / det;
  return {inv * (J(1, 1) * g.x - J(1, 0) * g.y), inv * (-J(0, 1) * g.x + J(0, 0) * g.y)};
}

void require_valid_map(const ReferenceMapEval& m, const Quad& q) {
  if (m.det <= 0.0) {
    (void)q;
    throw InvalidMapError("bilinear map has nonpositive Jacobian at a quadrature point");
  }
}

}  // namespace

Eigen::Matrix4d fem_stiffness(const Quad& q, const DiffusionTensor& kappa,
                              const QuadratureRule& rule) {
  Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
  for (int qp = 0; qp < rule.size(); ++qp) {
    const Vec2 p = rule.point(qp);
    const ReferenceMapEval m = map_at(q, p.x, p.y);
    require_valid_map(m, q);
    const ShapeEval s = bilinear_shapes(p.x, p.y);
    std::array<Vec2, 4> g;
    for (int i = 0; i < 4; ++i) g[i] = physical_gradient(m.jacobian, m.det, s.grad[i]);
    const double w = rule.weight(qp) * m.det;
    for (int i = 0; i < 4; ++i) {
      const Vec2 kg = kappa.apply(g[i]);
      for (int j = 0; j <= i; ++j) {
        double kij = w * dot(kg, g[j]);
        K(i, j) += kij;
        if (i != j) K(j, i) += kij;
      }
    }
  }
  return K;
}

double hourglass_energy(const Quad& q, const DiffusionTensor& kappa, const QuadratureRule& rule) {
  double tau = 0.0;
  for (int qp = 0; qp < rule.size(); ++qp) {
    const Vec2 p = rule.point(qp);
    const ReferenceMapEval m = map_at(q, p.x, p.y);
    require_valid_map(m, q);
    const HourglassEval h = hourglass_shape(p.x, p.y);
    const Vec2 g = physical_gradient(m.jacobian, m.det, h.grad);
    tau += rule.weight(qp) * m.det * dot(kappa.apply(g), g);
  }
  return tau;
}

double tau_rectangle(double a, double b, const DiffusionTensor& kappa) {
  if (a <= 0.0 || b <= 0.0) throw InvalidArgumentError("rectangle sides must be positive");
  return (b * b * kappa.k11() + a * a * kappa.k22()) / (3.0 * a * b);
}

double tau_parallelogram(double a, double b, double theta, const DiffusionTensor& kappa) {
  if (a <= 0.0 || b <= 0.0) throw InvalidArgumentError("parallelogram sides must be positive");
  if (!(theta > 0.0 && theta < M_PI)) {
    throw InvalidArgumentError("parallelogram angle must lie in (0, pi)");
  }
  const double s = std::sin(theta), c = std::cos(theta);
  return (a * a * kappa.k22() + b * b * kappa.k11()) / (3.0 * a * b * s) +
         b * ((kappa.k22() - kappa.k11()) * c * c - 2.0 * kappa.k12() * c * s) / (3.0 * a * s);
}

}  // namespace hg
