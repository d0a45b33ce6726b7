#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hourglass/assembly.hpp"
#include "hourglass/mesh.hpp"

namespace hg {

/// One row of an experiment table. Fields that do not apply to a given run
/// are NaN and render as empty CSV cells.
struct ResultRow {
  std::string scheme;
  int n = 0;
  double h_mean = nan_value();
  double tau = nan_value();
  double linf_error = nan_value();
  double interior_max = nan_value();
  double rate = nan_value();

  static double nan_value();
};

/// A solved field kept around for VTK output.
struct FieldSnapshot {
  std::string name;
  Mesh mesh;
  Eigen::VectorXd u;
  Eigen::VectorXd error;
};

/// Boundary-data propagation study: checkerboard Dirichlet data on uniform
/// n-by-n grids, solved with VEM for a list of constant tau values plus the
/// isoparametric comparator, measured by the largest |u_h| away from the
/// boundary and the distance to a fine reference solution.
struct HourglassConfig {
  std::vector<int> sizes = {20, 40, 80};
  std::vector<double> taus = {0.01, 0.1, 1.0, 10.0, 100.0, 2.0 / 3.0};
  double amplitude = 0.25;
  double margin = 0.25;
  int reference_n = 160;
};

/// Alternating-sign boundary data: grid vertex (i, j) gets
/// amplitude * (-1)^(i+j), so the trace oscillates like the hourglass mode on
/// every boundary cell. Requires a structured n-by-n mesh with n even.
std::map<int, double> checkerboard_boundary(const Mesh& m, double amplitude);

std::vector<ResultRow> run_hourglass(const HourglassConfig& config,
                                     std::vector<FieldSnapshot>* fields = nullptr);

/// Manufactured diffusion problem: exact solution, analytic source, boundary
/// trace, and the variable SPD coefficient.
struct MMSProblem {
  std::function<double(Point)> exact;
  std::function<Vec2(Point)> exact_gradient;
  std::function<double(Point)> source;
  KappaField kappa;
};

MMSProblem mms_data();

/// Convergence study config. With perturb_amplitude > 0 every mesh is
/// perturbed with the same seed before solving.
struct MMSConfig {
  std::vector<int> sizes = {10, 20, 40, 80};
  double perturb_amplitude = 0.0;
  std::uint64_t seed = 0;
  std::vector<Scheme> schemes = {Scheme::iso_fem(), Scheme::vem(TauPolicy::vem_trace())};
};

std::vector<ResultRow> run_mms(const MMSConfig& config,
                               std::vector<FieldSnapshot>* fields = nullptr);

/// Everything worth knowing about one element: decomposition pieces, GBC
/// coefficients, tau under each requested policy with the resulting K, and
/// the residual of the quadrature identity K_quad = A + tau_quad B.
struct TauEntry {
  std::string policy;
  bool ok = false;
  double tau = 0.0;
  std::string error;        // category: message, when !ok
  Eigen::Matrix4d stiffness;  // A + tau B, when ok
};

struct ElementReport {
  ElementDecomposition decomposition;
  GBCExpansion expansion;
  bool convex = false;
  std::vector<TauEntry> taus;
  std::optional<double> quadrature_identity_residual;  // absent if map invalid
};

ElementReport inspect_element(const Quad& q, const DiffusionTensor& kappa,
                              std::span<const TauPolicy> policies);

std::string format_element_report(const ElementReport& report);

}  // namespace hg
