#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hourglass/decomposition.hpp"
#include "hourglass/mesh.hpp"
#include "hourglass/projector.hpp"

namespace hg {

/// How the stabilization parameter is chosen per element.
struct TauPolicy {
  enum class Kind {
    VemTrace,             // trace(kappa) / 2, any element shape
    FemQuadrature,        // hourglass energy by Gauss quadrature (quads)
    RectangleClosed,      // closed form, rectangle within tolerance
    ParallelogramClosed,  // closed form, parallelogram within tolerance
    Constant,             // fixed value
  };

  Kind kind = Kind::VemTrace;
  int quadrature_order = 2;  // FemQuadrature only
  double value = 0.0;        // Constant only
  bool allow_zero = false;   // Constant only: permit the tau = 0 study

  static TauPolicy vem_trace() { return {Kind::VemTrace, 2, 0.0, false}; }
  static TauPolicy fem_quadrature(int order = 2) { return {Kind::FemQuadrature, order, 0.0, false}; }
  static TauPolicy rectangle_closed() { return {Kind::RectangleClosed, 2, 0.0, false}; }
  static TauPolicy parallelogram_closed() { return {Kind::ParallelogramClosed, 2, 0.0, false}; }
  static TauPolicy constant(double v, bool allow_zero = false) {
    return {Kind::Constant, 2, v, allow_zero};
  }

  std::string name() const;
};

/// tau for one element under the given policy. Closed-form policies accept
/// the shape in any position/orientation (the coefficient is rotated into the
/// element frame) but reject shapes that are not rectangles/parallelograms
/// within 1e-10 relative tolerance.
double tau_vem(const DiffusionTensor& kappa, const TauPolicy& policy, const Polygon& element);

/// Local VEM matrices: consistency K_C, stabilization K_S = tau D^T D with
/// the dofi-dofi residual matrix D, and their sum.
struct VemMatrices {
  Eigen::MatrixXd consistency;
  Eigen::MatrixXd stabilization;
  Eigen::MatrixXd stiffness;
};

VemMatrices vem_element_matrices(const Polygon& p, const DiffusionTensor& kappa, double tau);

/// Per-element coefficient, evaluated at the element's area centroid.
using KappaField = std::function<DiffusionTensor(Point)>;
using ScalarField = std::function<double(Point)>;

/// Discretization choice for the global operator.
struct Scheme {
  enum class Kind { Vem, IsoFem };

  Kind kind = Kind::Vem;
  TauPolicy policy;          // Vem only
  int quadrature_order = 2;  // IsoFem only

  static Scheme vem(TauPolicy p) { return {Kind::Vem, p, 2}; }
  static Scheme iso_fem(int order = 2) { return {Kind::IsoFem, TauPolicy{}, order}; }

  std::string name() const;
};

/// Assembled global system. Starts unconstrained (one dof per mesh vertex,
/// singular); apply_dirichlet produces the reduced SPD system.
struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<Point> points;
  std::vector<int> boundary;  // sorted boundary vertex ids

  bool constrained = false;
  std::vector<int> free_to_vertex;   // reduced dof -> mesh vertex
  Eigen::VectorXd boundary_values;   // full length, zero at free vertices

  int num_vertices() const { return static_cast<int>(points.size()); }
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
};

/// Assembles stiffness and load over the mesh. The coefficient is frozen at
/// each element's centroid; the load uses f(centroid) |P| / N_P per vertex.
/// Element failures are rethrown with the cell index attached.
SparseSystem assemble_global(const Mesh& m, const KappaField& kappa_field, const Scheme& scheme,
                             const ScalarField& source = {});

/// Symmetric elimination of Dirichlet dofs; every boundary vertex needs a
/// value. Contributions of the constrained dofs move to the right-hand side.
SparseSystem apply_dirichlet(const SparseSystem& sys, const std::map<int, double>& values);
SparseSystem apply_dirichlet(const SparseSystem& sys, const std::function<double(Point)>& g);

/// Jacobi-preconditioned conjugate gradients on the constrained system.
/// Returns the full vertex vector (boundary values filled in) and solver
/// diagnostics. max_iter = 0 means 10 * #dofs.
std::pair<Eigen::VectorXd, SolveReport> solve(const SparseSystem& sys, double tol = 1e-10,
                                              int max_iter = 0);

}  // namespace hg
