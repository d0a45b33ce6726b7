#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "hourglass/decomposition.hpp"
#include "hourglass/geometry.hpp"

namespace hg {

/// Tensor-product Gauss-Legendre rule on the reference square [-1,1]^2.
/// Weights sum to 4; n points per direction integrate degree 2n-1 exactly.
class QuadratureRule {
 public:
  static QuadratureRule gauss(int points_per_direction);

  int size() const { return static_cast<int>(points_.size()); }
  Vec2 point(int q) const { return points_[q]; }
  double weight(int q) const { return weights_[q]; }
  int points_per_direction() const { return n_; }

 private:
  QuadratureRule() = default;
  int n_ = 0;
  std::vector<Vec2> points_;
  std::vector<double> weights_;
};

/// Values and reference gradients of the four bilinear shape functions at
/// (xi, eta). Vertex ordering matches the CCW quad: (-1,-1), (1,-1), (1,1),
/// (-1,1).
struct ShapeEval {
  std::array<double, 4> value;
  std::array<Vec2, 4> grad;
};

ShapeEval bilinear_shapes(double xi, double eta);

/// Pullback of the hourglass mode: Psi = (1/2)(-N1 + N2 - N3 + N4) = -xi*eta/2.
struct HourglassEval {
  double value;
  Vec2 grad;
};

HourglassEval hourglass_shape(double xi, double eta);

/// Bilinear map of `q` evaluated at a reference point.
struct ReferenceMapEval {
  Point x;
  Eigen::Matrix2d jacobian;
  double det = 0.0;
};

ReferenceMapEval map_at(const Quad& q, double xi, double eta);

/// Direct quadrature assembly of the element stiffness matrix. Throws
/// InvalidMapError if det J <= 0 at any quadrature point.
Eigen::Matrix4d fem_stiffness(const Quad& q, const DiffusionTensor& kappa,
                              const QuadratureRule& rule);

/// tau = integral of kappa grad(Psi) . grad(Psi), by the same quadrature.
double hourglass_energy(const Quad& q, const DiffusionTensor& kappa, const QuadratureRule& rule);

/// Closed form on the rectangle [0,a] x [0,b]: (b^2 k11 + a^2 k22) / (3ab).
double tau_rectangle(double a, double b, const DiffusionTensor& kappa);

/// Closed form on a parallelogram with sides a, b and angle theta, side a
/// along the x-axis.
double tau_parallelogram(double a, double b, double theta, const DiffusionTensor& kappa);

}  // namespace hg
