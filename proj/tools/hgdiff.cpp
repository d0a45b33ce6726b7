// hgdiff: assemble and solve 2D diffusion problems on quad/polygonal meshes
// with the K = A + tau B stiffness split, and reproduce the hourglass and
// manufactured-solution studies.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hourglass/assembly.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/experiments.hpp"
#include "hourglass/io.hpp"
#include "hourglass/isoparametric.hpp"
#include "hourglass/projector.hpp"

using namespace hg;

namespace {

int exit_code_for(const std::string& category) {
  if (category == "invalid_argument") return 2;
  if (category == "geometry") return 3;
  if (category == "invalid_map") return 4;
  if (category == "shape_mismatch") return 5;
  if (category == "solver") return 6;
  if (category == "io") return 7;
  return 1;
}

TauPolicy parse_policy(const std::string& text) {
  if (text == "trace") return TauPolicy::vem_trace();
  if (text == "quadrature") return TauPolicy::fem_quadrature();
  if (text.rfind("quadrature:", 0) == 0) {
    return TauPolicy::fem_quadrature(std::stoi(text.substr(11)));
  }
  if (text == "rectangle") return TauPolicy::rectangle_closed();
  if (text == "parallelogram") return TauPolicy::parallelogram_closed();
  if (text.rfind("constant:", 0) == 0) {
    return TauPolicy::constant(std::stod(text.substr(9)), true);
  }
  throw InvalidArgumentError(
      "unknown tau policy '" + text +
      "' (expected trace, quadrature[:n], rectangle, parallelogram, constant:value)");
}

Scheme parse_scheme(const std::string& text) {
  if (text == "fem") return Scheme::iso_fem();
  if (text.rfind("fem:", 0) == 0) return Scheme::iso_fem(std::stoi(text.substr(4)));
  if (text.rfind("vem-", 0) == 0) return Scheme::vem(parse_policy(text.substr(4)));
  if (text == "vem") return Scheme::vem(TauPolicy::vem_trace());
  throw InvalidArgumentError("unknown scheme '" + text + "' (expected fem[:n] or vem-<policy>)");
}

Quad quad_from_flat(const std::vector<double>& coords) {
  if (coords.size() != 8) {
    throw InvalidArgumentError("expected 8 numbers: x1,y1,...,x4,y4");
  }
  return Quad(Point{coords[0], coords[1]}, Point{coords[2], coords[3]},
              Point{coords[4], coords[5]}, Point{coords[6], coords[7]});
}

DiffusionTensor tensor_from_flat(const std::vector<double>& k) {
  if (k.size() != 3) throw InvalidArgumentError("expected 3 numbers: k11,k12,k22");
  return DiffusionTensor(k[0], k[1], k[2]);
}

struct ElementArgs {
  std::vector<double> vertices = {0, 0, 1, 0, 1, 1, 0, 1};
  std::string vertices_file;
  std::vector<double> kappa = {1, 0, 1};
  std::vector<std::string> policies = {"trace", "quadrature", "rectangle", "parallelogram"};
};

int run_element(const ElementArgs& args) {
  Quad q = [&] {
    if (!args.vertices_file.empty()) {
      Mesh m = read_mesh_json(args.vertices_file);
      if (m.num_cells() < 1) throw InvalidArgumentError("mesh file has no cells");
      return Quad(m.cell_polygon(0));
    }
    return quad_from_flat(args.vertices);
  }();
  DiffusionTensor kappa = tensor_from_flat(args.kappa);

  std::vector<TauPolicy> policies;
  for (const std::string& p : args.policies) policies.push_back(parse_policy(p));

  ElementReport report = inspect_element(q, kappa, policies);
  std::cout << format_element_report(report);
  return 0;
}

struct TauArgs {
  std::vector<double> a_values = {1.0};
  std::vector<double> b_values = {1.0};
  std::vector<double> theta_values = {90.0};  // degrees
  std::vector<double> kappa = {1, 0, 1};
};

int run_tau_table(const TauArgs& args) {
  DiffusionTensor kappa = tensor_from_flat(args.kappa);
  std::printf("a,b,theta_deg,tau_rectangle,tau_parallelogram,tau_quadrature,tau_trace\n");
  for (double a : args.a_values) {
    for (double b : args.b_values) {
      for (double deg : args.theta_values) {
        const double theta = deg * M_PI / 180.0;
        const double c = b * std::cos(theta), s = b * std::sin(theta);
        Quad para(Point{0, 0}, Point{a, 0}, Point{a + c, s}, Point{c, s});
        const double quad = hourglass_energy(para, kappa, QuadratureRule::gauss(2));
        std::string rect = "";
        if (std::abs(deg - 90.0) < 1e-12) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.12g", tau_rectangle(a, b, kappa));
          rect = buf;
        }
        std::printf("%.12g,%.12g,%.12g,%s,%.12g,%.12g,%.12g\n", a, b, deg, rect.c_str(),
                    tau_parallelogram(a, b, theta, kappa), quad, 0.5 * kappa.trace());
      }
    }
  }
  return 0;
}

struct HourglassArgs {
  std::vector<int> sizes = {20, 40, 80};
  std::vector<double> taus = {0.01, 0.1, 1.0, 10.0, 100.0, 2.0 / 3.0};
  double amplitude = 0.25;
  double margin = 0.25;
  int reference_n = 160;
  std::string out_dir = "out";
  bool vtk = false;
};

int run_hourglass_cmd(const HourglassArgs& args) {
  HourglassConfig config;
  config.sizes = args.sizes;
  config.taus = args.taus;
  config.amplitude = args.amplitude;
  config.margin = args.margin;
  config.reference_n = args.reference_n;

  std::vector<FieldSnapshot> fields;
  auto rows = run_hourglass(config, args.vtk ? &fields : nullptr);

  std::filesystem::create_directories(args.out_dir);
  const auto csv = std::filesystem::path(args.out_dir) / "hourglass.csv";
  write_csv(csv, rows);
  if (args.vtk) write_snapshots(args.out_dir, fields);

  std::printf("scheme      n     tau        interior_max   linf_vs_ref\n");
  for (const ResultRow& r : rows) {
    std::printf("%-10s %4d  %-9g  %.6e   %.6e\n", r.scheme.c_str(), r.n,
                std::isnan(r.tau) ? 0.0 : r.tau, r.interior_max, r.linf_error);
  }
  std::printf("wrote %s\n", csv.string().c_str());
  return 0;
}

struct MmsArgs {
  std::vector<int> sizes = {10, 20, 40, 80};
  double perturb = 0.0;
  std::uint64_t seed = 42;
  std::vector<std::string> schemes = {"fem", "vem-trace"};
  std::string out_dir = "out";
  bool vtk = false;
};

int run_mms_cmd(const MmsArgs& args) {
  MMSConfig config;
  config.sizes = args.sizes;
  config.perturb_amplitude = args.perturb;
  config.seed = args.seed;
  config.schemes.clear();
  for (const std::string& s : args.schemes) config.schemes.push_back(parse_scheme(s));

  std::vector<FieldSnapshot> fields;
  auto rows = run_mms(config, args.vtk ? &fields : nullptr);

  std::filesystem::create_directories(args.out_dir);
  const auto csv = std::filesystem::path(args.out_dir) / "mms.csv";
  write_csv(csv, rows);
  if (args.vtk) write_snapshots(args.out_dir, fields);

  std::printf("scheme          n     h_mean      Linf_error     rate\n");
  for (const ResultRow& r : rows) {
    std::printf("%-14s %4d  %.6f    %.6e   ", r.scheme.c_str(), r.n, r.h_mean, r.linf_error);
    if (std::isnan(r.rate)) {
      std::printf("-\n");
    } else {
      std::printf("%.3f\n", r.rate);
    }
  }
  std::printf("wrote %s\n", csv.string().c_str());
  return 0;
}

struct ProjectArgs {
  std::vector<double> vertices = {0, 0, 1, 0, 1, 1, 0, 1};
  std::vector<double> values;
  int basis = -1;
  std::string p0 = "vertex";
};

int run_project(const ProjectArgs& args) {
  if (args.vertices.size() % 2 != 0 || args.vertices.size() < 6) {
    throw InvalidArgumentError("vertices must be a flat list x1,y1,x2,y2,... of 3+ points");
  }
  std::vector<Point> pts;
  for (std::size_t i = 0; i + 1 < args.vertices.size(); i += 2) {
    pts.push_back({args.vertices[i], args.vertices[i + 1]});
  }
  Polygon poly(pts);
  P0Choice choice;
  if (args.p0 == "vertex") {
    choice = P0Choice::VertexMean;
  } else if (args.p0 == "boundary") {
    choice = P0Choice::BoundaryMean;
  } else {
    throw InvalidArgumentError("--p0 must be 'vertex' or 'boundary'");
  }

  const Point vc = vertex_center(poly);
  const Point bc = boundary_centroid(poly);
  std::printf("vertex_center     = (%.12g, %.12g)\n", vc.x, vc.y);
  std::printf("boundary_centroid = (%.12g, %.12g)\n", bc.x, bc.y);

  auto print_poly = [](const char* label, const LinearPolynomial& p) {
    std::printf("%s = %.12g %+.12g x %+.12g y\n", label, p.a, p.b, p.c);
  };
  if (args.basis >= 0) {
    print_poly("projection", project_basis_function(poly, args.basis, choice));
  } else if (!args.values.empty()) {
    print_poly("projection", project_nodal_function(poly, args.values, choice));
  } else {
    for (int i = 0; i < poly.size(); ++i) {
      char label[32];
      std::snprintf(label, sizeof(label), "projection[phi_%d]", i + 1);
      print_poly(label, project_basis_function(poly, i, choice));
    }
  }

  Eigen::MatrixXd D = residual_dofs(poly, choice);
  std::printf("residual dof matrix D:\n");
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    std::printf(" ");
    for (Eigen::Index j = 0; j < D.cols(); ++j) std::printf(" % .12g", D(i, j));
    std::printf("\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stiffness decomposition K = A + tau B for 2D diffusion: element tools, "
               "VEM/FEM assembly, and the hourglass/manufactured-solution studies"};
  app.require_subcommand(1);
  app.set_config("--config")->description("TOML config file mirroring the flags");
  app.allow_config_extras(CLI::config_extras_mode::error);

  ElementArgs element_args;
  auto* element = app.add_subcommand("element", "Inspect one quad element: A, B, gamma, C, tau");
  element->add_option("--vertices", element_args.vertices, "x1,y1,...,x4,y4 (CCW)")->delimiter(',');
  element->add_option("--file", element_args.vertices_file, "mesh json; uses the first cell");
  element->add_option("--kappa", element_args.kappa, "k11,k12,k22")->delimiter(',');
  element->add_option("--policies", element_args.policies, "tau policies to evaluate")
      ->delimiter(',');

  TauArgs tau_args;
  auto* tau = app.add_subcommand("tau", "Tabulate tau over rectangle/parallelogram families");
  tau->add_option("--a", tau_args.a_values, "side a values")->delimiter(',');
  tau->add_option("--b", tau_args.b_values, "side b values")->delimiter(',');
  tau->add_option("--theta", tau_args.theta_values, "angles in degrees")->delimiter(',');
  tau->add_option("--kappa", tau_args.kappa, "k11,k12,k22")->delimiter(',');

  HourglassArgs hg_args;
  auto* hour = app.add_subcommand("hourglass", "Checkerboard boundary-data propagation study");
  hour->add_option("--sizes", hg_args.sizes, "mesh sizes (even)")->delimiter(',');
  hour->add_option("--taus", hg_args.taus, "constant tau values")->delimiter(',');
  hour->add_option("--amplitude", hg_args.amplitude, "boundary amplitude");
  hour->add_option("--margin", hg_args.margin, "interior margin for the max metric");
  hour->add_option("--reference-n", hg_args.reference_n, "reference mesh size");
  hour->add_option("--out", hg_args.out_dir, "output directory");
  hour->add_flag("--vtk", hg_args.vtk, "also write VTK fields");

  MmsArgs mms_args;
  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("--sizes", mms_args.sizes, "mesh sizes")->delimiter(',');
  mms->add_option("--perturb", mms_args.perturb, "perturbation amplitude in [0, 0.5)");
  mms->add_option("--seed", mms_args.seed, "perturbation seed");
  mms->add_option("--schemes", mms_args.schemes, "fem[:n] or vem-<policy>")->delimiter(',');
  mms->add_option("--out", mms_args.out_dir, "output directory");
  mms->add_flag("--vtk", mms_args.vtk, "also write VTK fields");

  ProjectArgs project_args;
  auto* project = app.add_subcommand("project", "Debug dump of the linear projection");
  project->add_option("--vertices", project_args.vertices, "x1,y1,x2,y2,... (CCW)")->delimiter(',');
  project->add_option("--values", project_args.values, "nodal values to project")->delimiter(',');
  project->add_option("--basis", project_args.basis, "project basis function i (0-based)");
  project->add_option("--p0", project_args.p0, "constant choice: vertex | boundary");

  CLI11_PARSE(app, argc, argv);

  try {
    if (element->parsed()) return run_element(element_args);
    if (tau->parsed()) return run_tau_table(tau_args);
    if (hour->parsed()) return run_hourglass_cmd(hg_args);
    if (mms->parsed()) return run_mms_cmd(mms_args);
    if (project->parsed()) return run_project(project_args);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: {\"category\": \"%s\", \"message\": \"%s\"}\n",
                 e.category().c_str(), e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: {\"category\": \"internal\", \"message\": \"%s\"}\n", e.what());
    return 1;
  }
  return 0;
}
