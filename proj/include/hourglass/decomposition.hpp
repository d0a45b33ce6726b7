#pragma once

#include <Eigen/Dense>
#include <array>

#include "hourglass/geometry.hpp"

namespace hg {

/// Constant symmetric positive-definite 2x2 diffusion coefficient.
class DiffusionTensor {
 public:
  DiffusionTensor(double k11, double k12, double k22);

  static DiffusionTensor identity() { return {1.0, 0.0, 1.0}; }
  static DiffusionTensor isotropic(double k) { return {k, 0.0, k}; }

  double k11() const { return k11_; }
  double k12() const { return k12_; }
  double k22() const { return k22_; }
  double trace() const { return k11_ + k22_; }

  Vec2 apply(Vec2 g) const { return {k11_ * g.x + k12_ * g.y, k12_ * g.x + k22_ * g.y}; }
  Eigen::Matrix2d matrix() const;

 private:
  double k11_, k12_, k22_;
};

/// Stiffness decomposition pieces for one element: K = A + tau * B with
/// B = gamma * gamma^T, plus the 2x2 block C that generates A on quads.
struct ElementDecomposition {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::Vector4d gamma;
  Eigen::Matrix2d C;
  double area = 0.0;
};

/// Coefficients of each vertex basis function in the {1, x, y, hourglass}
/// basis: phi_i = a_i + b_i x + c_i y + hourglass_i * Psi_h.
struct GBCExpansion {
  std::array<double, 4> a;
  std::array<double, 4> b;
  std::array<double, 4> c;
  std::array<double, 4> hourglass;  // T_i' = (-1)^i T_i / |Q|
};

/// Diagonals d_i = V_{i+1} - V_{i-1} (cyclic, 1-based labels from the
/// construction; slot k in the result corresponds to vertex k).
std::array<Vec2, 4> diagonals(const Quad& q);

/// Consistency matrix A_ij = (kappa d_j^perp) . d_i^perp / (4|P|) on a
/// general polygon, using d_i = V_{i+1} - V_{i-1}. Symmetric, PSD, rank <= 2,
/// zero row sums.
Eigen::MatrixXd consistency_matrix(const Polygon& p, const DiffusionTensor& kappa);

/// Signed areas T_i of the triangles obtained by dropping vertex V_i.
std::array<double, 4> signed_triangle_areas(const Quad& q);

/// gamma_i = (-1)^i T_i / |Q| (1-based sign convention). Sums to zero and
/// annihilates linear nodal data.
Eigen::Vector4d gamma_vector(const Quad& q);

/// B = gamma gamma^T. Constant alternating-sign matrix for parallelograms.
Eigen::Matrix4d stability_basis_matrix(const Quad& q);

/// Expansion of the four vertex basis functions in {1, x, y, Psi_h}.
GBCExpansion gbc_expansion(const Quad& q);

/// K = A + tau B. tau = 0 is allowed (yields the rank-2 consistency part).
Eigen::Matrix4d element_stiffness(const Quad& q, const DiffusionTensor& kappa, double tau);

/// All decomposition pieces at once.
ElementDecomposition decompose(const Quad& q, const DiffusionTensor& kappa);

}  // namespace hg
