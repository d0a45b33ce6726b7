#include "hourglass/assembly.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "hourglass/errors.hpp"
#include "hourglass/isoparametric.hpp"

namespace hg {

std::string TauPolicy::name() const {
  switch (kind) {
    case Kind::VemTrace:
      return "trace";
    case Kind::FemQuadrature:
      return "quadrature" + std::to_string(quadrature_order);
    case Kind::RectangleClosed:
      return "rectangle";
    case Kind::ParallelogramClosed:
      return "parallelogram";
    case Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "constant:%g", value);
      return buf;
    }
  }
  return "unknown";
}

std::string Scheme::name() const {
  return kind == Kind::IsoFem ? "fem" : "vem-" + policy.name();
}

namespace {

struct ParallelogramFrame {
  double a = 0.0;
  double b = 0.0;
  double theta = 0.0;
  DiffusionTensor kappa_local = DiffusionTensor::identity();
};

// Detects a parallelogram and expresses the coefficient in the frame whose
// x-axis runs along the first side, so the closed forms apply to elements in
// any position.
ParallelogramFrame parallelogram_frame(const Polygon& p, const DiffusionTensor& kappa) {
  if (p.size() != 4) throw ShapeMismatchError("closed-form tau requires a quadrilateral");
  Vec2 e1 = p.vertex(1) - p.vertex(0);
  Vec2 e2 = p.vertex(2) - p.vertex(1);
  Vec2 e3 = p.vertex(3) - p.vertex(2);
  double tol = 1e-10 * (norm(e1) + norm(e3));
  if (norm(e1 + e3) > tol) {
    throw ShapeMismatchError("element is not a parallelogram within tolerance");
  }

  ParallelogramFrame f;
  f.a = norm(e1);
  f.b = norm(e2);
  Vec2 u1 = e1 / f.a;
  Vec2 u2 = {-u1.y, u1.x};  // CCW normal of the first side
  // CCW polygons put the second side in the upper half-plane of the first,
  // so theta = atan2(e2 . u2, e2 . u1) lies in (0, pi).
  f.theta = std::atan2(dot(e2, u2), dot(e2, u1));

  const Eigen::Matrix2d k = kappa.matrix();
  Eigen::Vector2d v1(u1.x, u1.y), v2(u2.x, u2.y);
  f.kappa_local = DiffusionTensor(v1.dot(k * v1), v1.dot(k * v2), v2.dot(k * v2));
  return f;
}

}  // namespace

double tau_vem(const DiffusionTensor& kappa, const TauPolicy& policy, const Polygon& element) {
  switch (policy.kind) {
    case TauPolicy::Kind::VemTrace:
      return 0.5 * kappa.trace();
    case TauPolicy::Kind::FemQuadrature: {
      if (element.size() != 4) {
        throw ShapeMismatchError("quadrature tau requires a quadrilateral");
      }
      return hourglass_energy(Quad(element), kappa,
                              QuadratureRule::gauss(policy.quadrature_order));
    }
    case TauPolicy::Kind::RectangleClosed: {
      ParallelogramFrame f = parallelogram_frame(element, kappa);
      if (std::abs(f.theta - 0.5 * M_PI) > 1e-10) {
        throw ShapeMismatchError("element is not a rectangle within tolerance");
      }
      return tau_rectangle(f.a, f.b, f.kappa_local);
    }
    case TauPolicy::Kind::ParallelogramClosed: {
      ParallelogramFrame f = parallelogram_frame(element, kappa);
      return tau_parallelogram(f.a, f.b, f.theta, f.kappa_local);
    }
    case TauPolicy::Kind::Constant:
      if (policy.value < 0.0 || (policy.value == 0.0 && !policy.allow_zero)) {
        throw InvalidArgumentError("constant tau must be positive (or explicitly allow zero)");
      }
      return policy.value;
  }
  throw InvalidArgumentError("unknown tau policy");
}

VemMatrices vem_element_matrices(const Polygon& p, const DiffusionTensor& kappa, double tau) {
  if (tau < 0.0) throw InvalidArgumentError("tau must be nonnegative");
  VemMatrices out;
  out.consistency = consistency_matrix(p, kappa);
  Eigen::MatrixXd D = residual_dofs(p, P0Choice::VertexMean);
  out.stabilization = tau * (D.transpose() * D);
  out.stiffness = out.consistency + out.stabilization;
  return out;
}

namespace {

Eigen::MatrixXd element_matrix(const Polygon& poly, const DiffusionTensor& kappa,
                               const Scheme& scheme) {
  if (scheme.kind == Scheme::Kind::IsoFem) {
    if (poly.size() != 4) throw ShapeMismatchError("isoparametric scheme requires quad cells");
    return fem_stiffness(Quad(poly), kappa, QuadratureRule::gauss(scheme.quadrature_order));
  }
  double tau = tau_vem(kappa, scheme.policy, poly);
  return vem_element_matrices(poly, kappa, tau).stiffness;
}

[[noreturn]] void rethrow_with_cell(int cell, const Error& e) {
  const std::string msg = "cell " + std::to_string(cell) + ": " + e.what();
  if (dynamic_cast<const GeometryError*>(&e)) throw GeometryError(msg);
  if (dynamic_cast<const InvalidMapError*>(&e)) throw InvalidMapError(msg);
  if (dynamic_cast<const ShapeMismatchError*>(&e)) throw ShapeMismatchError(msg);
  if (dynamic_cast<const InvalidArgumentError*>(&e)) throw InvalidArgumentError(msg);
  throw Error(e.category(), msg);
}

}  // namespace

SparseSystem assemble_global(const Mesh& m, const KappaField& kappa_field, const Scheme& scheme,
                             const ScalarField& source) {
  validate(m);
  if (!kappa_field) throw InvalidArgumentError("kappa field is required");

  const int n = m.num_points();
  SparseSystem sys;
  sys.points = m.points;
  sys.boundary = m.boundary;
  sys.rhs = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < m.num_cells(); ++c) {
    try {
      const Polygon poly = m.cell_polygon(c);
      const Point center = centroid(poly);
      const DiffusionTensor kappa = kappa_field(center);
      const Eigen::MatrixXd K = element_matrix(poly, kappa, scheme);

      const auto& cell = m.cells[c];
      const int nv = static_cast<int>(cell.size());
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) {
          triplets.emplace_back(cell[i], cell[j], K(i, j));
        }
      }
      if (source) {
        const double load = source(center) * poly.area() / nv;
        for (int i = 0; i < nv; ++i) sys.rhs(cell[i]) += load;
      }
    } catch (const Error& e) {
      rethrow_with_cell(c, e);
    }
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();

  const Eigen::SparseMatrix<double> diff =
      Eigen::SparseMatrix<double>(sys.matrix.transpose()) - sys.matrix;
  if (diff.norm() != 0.0) {
    throw Error("internal", "assembled matrix lost symmetry");
  }
  return sys;
}

SparseSystem apply_dirichlet(const SparseSystem& sys, const std::map<int, double>& values) {
  if (sys.constrained) throw InvalidArgumentError("system is already constrained");
  const int n = sys.num_vertices();

  SparseSystem out;
  out.points = sys.points;
  out.boundary = sys.boundary;
  out.constrained = true;
  out.boundary_values = Eigen::VectorXd::Zero(n);

  std::vector<int> vertex_to_free(n, -1);
  for (int v = 0; v < n; ++v) {
    if (std::binary_search(sys.boundary.begin(), sys.boundary.end(), v)) {
      auto it = values.find(v);
      if (it == values.end()) {
        throw InvalidArgumentError("missing boundary value for vertex " + std::to_string(v));
      }
      out.boundary_values(v) = it->second;
    } else {
      vertex_to_free[v] = static_cast<int>(out.free_to_vertex.size());
      out.free_to_vertex.push_back(v);
    }
  }

  const int nf = static_cast<int>(out.free_to_vertex.size());
  out.rhs = Eigen::VectorXd::Zero(nf);
  for (int f = 0; f < nf; ++f) out.rhs(f) = sys.rhs(out.free_to_vertex[f]);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < sys.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, col); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      const int fi = vertex_to_free[i];
      const int fj = vertex_to_free[j];
      if (fi >= 0 && fj >= 0) {
        triplets.emplace_back(fi, fj, it.value());
      } else if (fi >= 0 && fj < 0) {
        out.rhs(fi) -= it.value() * out.boundary_values(j);
      }
    }
  }
  out.matrix.resize(nf, nf);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

SparseSystem apply_dirichlet(const SparseSystem& sys, const std::function<double(Point)>& g) {
  if (!g) throw InvalidArgumentError("boundary value function is required");
  std::map<int, double> values;
  for (int v : sys.boundary) values[v] = g(sys.points[v]);
  return apply_dirichlet(sys, values);
}

std::pair<Eigen::VectorXd, SolveReport> solve(const SparseSystem& sys, double tol, int max_iter) {
  if (!sys.constrained) throw SolverError("solve requires a constrained system");
  if (tol <= 0.0) throw InvalidArgumentError("solver tolerance must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(sys.rhs.size());
  if (max_iter <= 0) max_iter = 10 * std::max(n, 1);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  SolveReport report;

  const double norm_b = sys.rhs.norm();
  if (norm_b > 0.0) {
    Eigen::VectorXd inv_diag(n);
    for (int i = 0; i < n; ++i) {
      const double d = sys.matrix.coeff(i, i);
      if (d <= 0.0) throw SolverError("nonpositive diagonal entry; system is not SPD");
      inv_diag(i) = 1.0 / d;
    }

    Eigen::VectorXd r = sys.rhs;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    double res = r.norm() / norm_b;
    double first_res = res, best_res = res;
    bool converged = res <= tol;

    while (!converged && report.iterations < max_iter) {
      const Eigen::VectorXd Kp = sys.matrix * p;
      const double alpha = rz / p.dot(Kp);
      x += alpha * p;
      r -= alpha * Kp;
      ++report.iterations;
      res = r.norm() / norm_b;
      best_res = std::min(best_res, res);
      if (res <= tol) {
        converged = true;
        break;
      }
      z = inv_diag.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    report.relative_residual = res;
    if (!converged) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "PCG did not converge in %d iterations (residual first %.3e, best %.3e, last %.3e)",
                    report.iterations, first_res, best_res, res);
      throw SolverError(buf);
    }
  }

  Eigen::VectorXd full = sys.boundary_values;
  for (int f = 0; f < n; ++f) full(sys.free_to_vertex[f]) = x(f);

  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {full, report};
}

}  // namespace hg
