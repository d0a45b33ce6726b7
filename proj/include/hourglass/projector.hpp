#pragma once

#include <Eigen/Dense>
#include <span>

#include "hourglass/geometry.hpp"

namespace hg {

/// a + b*x + c*y.
struct LinearPolynomial {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(Point p) const { return a + b * p.x + c * p.y; }
  Vec2 gradient() const { return {b, c}; }
};

/// The two admissible choices for the constant part of the projection; both
/// are computable from boundary values alone.
enum class P0Choice {
  VertexMean,    // mean of the vertex values
  BoundaryMean,  // edge-length-weighted mean along the boundary
};

/// Arithmetic mean of the vertices.
Point vertex_center(const Polygon& p);

/// Vertex average weighted by (|e_{i-1}| + |e_i|) / 2 over the perimeter;
/// coincides with vertex_center when all edges have equal length.
Point boundary_centroid(const Polygon& p);

/// Projection of the i-th vertex basis function onto linear polynomials:
/// gradient d_i^perp / (2|P|) plus the constant fixed by `choice`.
LinearPolynomial project_basis_function(const Polygon& p, int i,
                                        P0Choice choice = P0Choice::VertexMean);

/// Projection of the function with the given vertex values. Reproduces
/// linear polynomials exactly; on quads its kernel is the hourglass mode.
LinearPolynomial project_nodal_function(const Polygon& p, std::span<const double> nodal_values,
                                        P0Choice choice = P0Choice::VertexMean);

/// Residual dof matrix D_ki = dof_k[(I - P)phi_i] where P is the projection
/// above. On quads D_ki = gamma_i * (-1)^k / 2 and D^T D = B.
Eigen::MatrixXd residual_dofs(const Polygon& p, P0Choice choice = P0Choice::VertexMean);

}  // namespace hg
