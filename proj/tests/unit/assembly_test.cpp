#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "hourglass/assembly.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/isoparametric.hpp"
#include "support/random_shapes.hpp"

using namespace hg;

namespace {

const Quad kUnitSquare{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}};

KappaField constant_kappa(DiffusionTensor k) {
  return [k](Point) { return k; };
}

Polygon regular_hexagon() {
  std::vector<Point> v;
  for (int i = 0; i < 6; ++i) {
    double ang = 2.0 * M_PI * i / 6.0;
    v.push_back({std::cos(ang), std::sin(ang)});
  }
  return Polygon(v);
}

}  // namespace

TEST_CASE("tau policies") {
  Polygon square = kUnitSquare.as_polygon();
  CHECK(tau_vem(DiffusionTensor::identity(), TauPolicy::vem_trace(), square) == doctest::Approx(1.0));
  CHECK(tau_vem(DiffusionTensor(10.0, 0.0, 2.0), TauPolicy::vem_trace(), square) ==
        doctest::Approx(6.0));
  CHECK(tau_vem(DiffusionTensor::identity(), TauPolicy::fem_quadrature(), square) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(tau_vem(DiffusionTensor::identity(), TauPolicy::rectangle_closed(), square) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(tau_vem(DiffusionTensor::identity(), TauPolicy::constant(0.37), square) ==
        doctest::Approx(0.37));

  Polygon skewed(std::vector<Point>{{0, 0}, {2, 0}, {2.6, 1.1}, {0.6, 1.1}});
  CHECK_THROWS_AS(tau_vem(DiffusionTensor::identity(), TauPolicy::rectangle_closed(), skewed),
                  ShapeMismatchError);
  Polygon trapezoid(std::vector<Point>{{0, 0}, {2, 0}, {1.5, 1}, {0.5, 1}});
  CHECK_THROWS_AS(tau_vem(DiffusionTensor::identity(), TauPolicy::parallelogram_closed(), trapezoid),
                  ShapeMismatchError);
  CHECK_THROWS_AS(tau_vem(DiffusionTensor::identity(), TauPolicy::constant(0.0), square),
                  InvalidArgumentError);
  CHECK(tau_vem(DiffusionTensor::identity(), TauPolicy::constant(0.0, true), square) == 0.0);

  // Closed forms accept rotated/translated shapes by moving the coefficient
  // into the element frame.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.4, 2.5);
  std::uniform_real_distribution<double> ang(M_PI / 10.0, 9.0 * M_PI / 10.0);
  for (int t = 0; t < 50; ++t) {
    double a = u(rng), b = u(rng), theta = ang(rng), phi = 2.0 * M_PI * u(rng);
    auto rot = [&](Point p) -> Point {
      return {std::cos(phi) * p.x - std::sin(phi) * p.y + 3.0,
              std::sin(phi) * p.x + std::cos(phi) * p.y - 1.0};
    };
    const double c = b * std::cos(theta), s = b * std::sin(theta);
    Quad para(rot({0, 0}), rot({a, 0}), rot({a + c, s}), rot({c, s}));
    DiffusionTensor kappa = testing::random_spd_tensor(rng);
    double closed = tau_vem(kappa, TauPolicy::parallelogram_closed(), para.as_polygon());
    double quad = hourglass_energy(para, kappa, QuadratureRule::gauss(2));
    CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("vem element matrices") {
  VemMatrices m = vem_element_matrices(kUnitSquare.as_polygon(), DiffusionTensor::identity(), 1.0);
  Eigen::MatrixXd expected = Eigen::MatrixXd(consistency_matrix(kUnitSquare.as_polygon(),
                                                                DiffusionTensor::identity())) +
                             Eigen::MatrixXd(stability_basis_matrix(kUnitSquare));
  CHECK((m.stiffness - expected).cwiseAbs().maxCoeff() < 1e-14);

  // tau = 0 leaves the consistency part only.
  VemMatrices m0 = vem_element_matrices(kUnitSquare.as_polygon(), DiffusionTensor::identity(), 0.0);
  CHECK((m0.stiffness - m0.consistency).cwiseAbs().maxCoeff() == 0.0);

  // Hexagon: stabilization kills linear nodal data, keeps rank N - 3.
  Polygon hex = regular_hexagon();
  VemMatrices mh = vem_element_matrices(hex, DiffusionTensor::identity(), 1.0);
  Eigen::VectorXd lin(6);
  for (int i = 0; i < 6; ++i) lin(i) = 0.7 + 1.3 * hex.vertex(i).x - 0.4 * hex.vertex(i).y;
  CHECK((mh.stabilization * lin).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mh.stabilization);
  CHECK(es.eigenvalues().minCoeff() > -1e-13);
  int positive = 0;
  for (int i = 0; i < 6; ++i)
    if (es.eigenvalues()(i) > 1e-10) ++positive;
  CHECK(positive == 3);  // N_P - 3

  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    Quad q = testing::random_quad(rng);
    Eigen::MatrixXd Ks = vem_element_matrices(q.as_polygon(), DiffusionTensor::identity(), 1.0)
                             .stabilization;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ks);
    CHECK(svd.singularValues()(0) > 1e-10);
    CHECK(svd.singularValues()(1) < 1e-12);  // rank 1 on quads
  }
}

TEST_CASE("the two element code paths agree on quads") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    Quad q = testing::random_quad(rng);
    DiffusionTensor kappa = testing::random_spd_tensor(rng);
    double tau = 0.1 + 2.0 * (t % 7);
    Eigen::Matrix4d direct = element_stiffness(q, kappa, tau);
    Eigen::MatrixXd vem = vem_element_matrices(q.as_polygon(), kappa, tau).stiffness;
    CHECK((vem - direct).cwiseAbs().maxCoeff() <= 1e-14 * direct.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("global assembly on tiny meshes") {
  Mesh one = make_structured_quad_mesh(1, 1);
  SparseSystem sys = assemble_global(one, constant_kappa(DiffusionTensor::identity()),
                                     Scheme::vem(TauPolicy::vem_trace()));
  Eigen::Matrix4d expected = Eigen::Matrix4d(consistency_matrix(kUnitSquare.as_polygon(),
                                                                DiffusionTensor::identity())) +
                             Eigen::Matrix4d(stability_basis_matrix(kUnitSquare));
  CHECK((Eigen::MatrixXd(sys.matrix) - expected).cwiseAbs().maxCoeff() < 1e-15);

  // 2x2 IsoFEM: diagonal entry of the center vertex collects four corner
  // contributions of 2/3 each (element matrices are scale invariant).
  Mesh four = make_structured_quad_mesh(2, 2);
  SparseSystem fsys = assemble_global(four, constant_kappa(DiffusionTensor::identity()),
                                      Scheme::iso_fem());
  CHECK(fsys.matrix.coeff(4, 4) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));

  // Row sums vanish before constraints.
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(fsys.num_vertices());
  CHECK((fsys.matrix * ones).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("VEM with tau = 2/3 matches isoparametric FEM on square meshes") {
  Mesh m = make_structured_quad_mesh(8, 8);
  auto kappa = constant_kappa(DiffusionTensor::identity());
  SparseSystem vem = assemble_global(m, kappa, Scheme::vem(TauPolicy::constant(2.0 / 3.0)));
  SparseSystem fem = assemble_global(m, kappa, Scheme::iso_fem());
  Eigen::SparseMatrix<double> diff = vem.matrix - fem.matrix;
  double scale = Eigen::MatrixXd(fem.matrix).cwiseAbs().maxCoeff();
  CHECK(Eigen::MatrixXd(diff).cwiseAbs().maxCoeff() < 1e-13 * scale);
}

TEST_CASE("assembly failures carry the cell index") {
  Mesh m = make_structured_quad_mesh(2, 1);
  // Collapse one cell into a degenerate sliver by merging two points.
  m.points[4] = m.points[1];
  try {
    assemble_global(m, constant_kappa(DiffusionTensor::identity()), Scheme::iso_fem());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("cell") != std::string::npos);
  }
}

TEST_CASE("dirichlet elimination") {
  Mesh m = make_structured_quad_mesh(4, 4);
  auto kappa = constant_kappa(DiffusionTensor::identity());
  SparseSystem sys = assemble_global(m, kappa, Scheme::vem(TauPolicy::vem_trace()));

  // Constant boundary data with zero load reproduces the constant.
  SparseSystem csys = apply_dirichlet(sys, [](Point) { return 3.25; });
  auto [u, report] = solve(csys, 1e-12);
  CHECK(report.relative_residual <= 1e-12);
  for (int v = 0; v < m.num_points(); ++v) CHECK(u(v) == doctest::Approx(3.25).epsilon(1e-10));

  // Zero boundary data keeps the reduced rhs equal to the load restriction.
  SparseSystem zsys = apply_dirichlet(sys, [](Point) { return 0.0; });
  CHECK(zsys.rhs.cwiseAbs().maxCoeff() == 0.0);

  // A missing boundary value is an error.
  std::map<int, double> partial;
  partial[m.boundary.front()] = 1.0;
  CHECK_THROWS_AS(apply_dirichlet(sys, partial), InvalidArgumentError);

  CHECK_THROWS_AS(apply_dirichlet(csys, [](Point) { return 0.0; }), InvalidArgumentError);
}

TEST_CASE("patch test: linear solutions are exact on perturbed meshes") {
  Mesh m = perturb_mesh(make_structured_quad_mesh(10, 10), 0.25, 7);
  auto ell = [](Point p) { return 1.5 - 0.75 * p.x + 0.5 * p.y; };
  DiffusionTensor kappa(2.0, 0.3, 1.0);

  std::vector<Scheme> schemes = {
      Scheme::iso_fem(),
      Scheme::vem(TauPolicy::vem_trace()),
      Scheme::vem(TauPolicy::fem_quadrature()),
      Scheme::vem(TauPolicy::constant(0.8)),
  };
  for (const Scheme& scheme : schemes) {
    SparseSystem sys = assemble_global(m, constant_kappa(kappa), scheme);
    auto [u, report] = solve(apply_dirichlet(sys, ell), 1e-13);
    double worst = 0.0;
    for (int v = 0; v < m.num_points(); ++v) worst = std::max(worst, std::abs(u(v) - ell(m.points[v])));
    CAPTURE(scheme.name());
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("closed-form tau policies assemble on square-cell meshes") {
  Mesh m = make_structured_quad_mesh(6, 6);
  auto ell = [](Point p) { return -1.0 + 2.0 * p.x + 0.25 * p.y; };
  DiffusionTensor kappa(2.0, 0.5, 3.0);
  for (const TauPolicy& policy : {TauPolicy::rectangle_closed(), TauPolicy::parallelogram_closed()}) {
    SparseSystem sys = assemble_global(m, [kappa](Point) { return kappa; }, Scheme::vem(policy));
    auto [u, report] = solve(apply_dirichlet(sys, ell), 1e-13);
    for (int v = 0; v < m.num_points(); ++v) {
      CHECK(u(v) == doctest::Approx(ell(m.points[v])).epsilon(1e-10));
    }
  }

  // The same policies refuse a perturbed mesh, since its cells are no longer
  // rectangles or parallelograms.
  Mesh p = perturb_mesh(m, 0.2, 3);
  CHECK_THROWS_AS(
      assemble_global(p, [kappa](Point) { return kappa; },
                      Scheme::vem(TauPolicy::rectangle_closed())),
      ShapeMismatchError);
}

TEST_CASE("patch test on a conforming polygonal mesh") {
  // Two pentagons sharing a split edge, flanked by triangles from a split
  // quad: exercises VEM assembly with mixed cell sizes.
  Mesh m;
  m.points = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 0.5}, {3, 0}, {3, 1}};
  m.cells = {
      {0, 1, 6, 4, 3},  // pentagon
      {1, 2, 5, 4, 6},  // pentagon
      {2, 7, 8},        // triangles from splitting the quad (2,7,8,5)
      {2, 8, 5},
  };
  m.boundary = {0, 1, 2, 3, 4, 5, 7, 8};
  validate(m);

  auto ell = [](Point p) { return 2.0 - 0.5 * p.x + 1.5 * p.y; };
  DiffusionTensor kappa(1.5, -0.2, 2.0);
  for (const TauPolicy& policy : {TauPolicy::vem_trace(), TauPolicy::constant(0.9)}) {
    SparseSystem sys = assemble_global(m, [kappa](Point) { return kappa; }, Scheme::vem(policy));
    auto [u, report] = solve(apply_dirichlet(sys, ell), 1e-13);
    for (int v = 0; v < m.num_points(); ++v) {
      CHECK(u(v) == doctest::Approx(ell(m.points[v])).epsilon(1e-10));
    }
  }

  // The isoparametric scheme refuses non-quad cells, naming the cell.
  try {
    assemble_global(m, [kappa](Point) { return kappa; }, Scheme::iso_fem());
    FAIL("expected shape mismatch");
  } catch (const ShapeMismatchError& e) {
    CHECK(std::string(e.what()).find("cell 0") != std::string::npos);
  }
}

TEST_CASE("pcg behavior") {
  // One free dof: converges in a single iteration.
  Mesh m = make_structured_quad_mesh(2, 2);
  auto kappa = constant_kappa(DiffusionTensor::identity());
  {
    SparseSystem sys = assemble_global(m, kappa, Scheme::iso_fem(),
                                       [](Point) { return 1.0; });
    SparseSystem csys = apply_dirichlet(sys, [](Point) { return 0.0; });
    REQUIRE(csys.rhs.size() == 1);
    auto [u, report] = solve(csys, 1e-12);
    CHECK(report.iterations == 1);
    CHECK(u.size() == m.num_points());
  }

  // 20x20 Laplace converges well within the iteration budget.
  Mesh big = make_structured_quad_mesh(20, 20);
  SparseSystem sys = assemble_global(big, kappa, Scheme::iso_fem());
  auto g = [](Point p) { return p.x * p.x - p.y; };
  auto [u, report] = solve(apply_dirichlet(sys, g), 1e-10);
  CHECK(report.relative_residual <= 1e-10);
  CHECK(report.iterations < 10 * 361);

  // Refusing to run on the unconstrained (singular) system.
  CHECK_THROWS_AS(solve(sys), SolverError);

  // Iteration cap produces a solver error that reports the residual history.
  try {
    solve(apply_dirichlet(sys, g), 1e-14, 2);
    FAIL("expected non-convergence");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}
