#include "hourglass/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hourglass/errors.hpp"
#include "hourglass/isoparametric.hpp"

namespace hg {

double ResultRow::nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::map<int, double> checkerboard_boundary(const Mesh& m, double amplitude) {
  if (amplitude <= 0.0) throw InvalidArgumentError("checkerboard amplitude must be positive");
  const auto& prov = m.provenance;
  if (prov.generator != "structured") {
    throw InvalidArgumentError("checkerboard boundary data needs a structured mesh");
  }
  if (prov.nx != prov.ny) throw InvalidArgumentError("checkerboard needs an n-by-n mesh");
  if (prov.nx % 2 != 0) throw InvalidArgumentError("checkerboard needs an even mesh size");

  const int nx = prov.nx;
  std::map<int, double> g;
  for (int v : m.boundary) {
    const int i = v % (nx + 1);
    const int j = v / (nx + 1);
    g[v] = ((i + j) % 2 == 0) ? amplitude : -amplitude;
  }
  return g;
}

namespace {

// Bilinear sampling of a nodal field on a structured grid.
class StructuredInterpolant {
 public:
  StructuredInterpolant(const Mesh& mesh, Eigen::VectorXd values)
      : nx_(mesh.provenance.nx), ny_(mesh.provenance.ny), domain_(mesh.provenance.domain),
        values_(std::move(values)) {}

  double operator()(Point p) const {
    const double sx = std::clamp((p.x - domain_.x0) / domain_.width() * nx_, 0.0, double(nx_));
    const double sy = std::clamp((p.y - domain_.y0) / domain_.height() * ny_, 0.0, double(ny_));
    const int i = std::min(static_cast<int>(sx), nx_ - 1);
    const int j = std::min(static_cast<int>(sy), ny_ - 1);
    const double xi = sx - i, eta = sy - j;
    auto at = [&](int ii, int jj) { return values_(jj * (nx_ + 1) + ii); };
    return (1 - xi) * (1 - eta) * at(i, j) + xi * (1 - eta) * at(i + 1, j) +
           xi * eta * at(i + 1, j + 1) + (1 - xi) * eta * at(i, j + 1);
  }

 private:
  int nx_, ny_;
  Rect domain_;
  Eigen::VectorXd values_;
};

// Piecewise-linear wave through the checkerboard values: +1 at even integers,
// -1 at odd ones. amplitude * wave(n x) * wave(n y) restricted to the unit
// square boundary is exactly the boundary trace of the n-mesh checkerboard.
double checkerboard_wave(double t) {
  double u = std::fmod(t, 2.0);
  if (u < 0.0) u += 2.0;
  return u <= 1.0 ? 1.0 - 2.0 * u : 2.0 * u - 3.0;
}

double interior_max_abs(const Mesh& m, const Eigen::VectorXd& u, double margin) {
  const Rect d = m.provenance.domain;
  double best = 0.0;
  for (int v = 0; v < m.num_points(); ++v) {
    const Point p = m.points[v];
    const double dist = std::min(std::min(p.x - d.x0, d.x1 - p.x), std::min(p.y - d.y0, d.y1 - p.y));
    if (dist >= margin - 1e-12) best = std::max(best, std::abs(u(v)));
  }
  return best;
}

void snprintf_name(std::string& out, const char* fmt, int n, const char* tag) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), fmt, n, tag);
  out = buf;
}

}  // namespace

std::vector<ResultRow> run_hourglass(const HourglassConfig& config,
                                     std::vector<FieldSnapshot>* fields) {
  if (config.sizes.empty()) throw InvalidArgumentError("hourglass study needs mesh sizes");
  if (config.taus.empty()) throw InvalidArgumentError("hourglass study needs tau values");
  if (config.amplitude <= 0.0) throw InvalidArgumentError("amplitude must be positive");
  for (int n : config.sizes) {
    if (n < 2 || n % 2 != 0) throw InvalidArgumentError("hourglass mesh sizes must be even and >= 2");
  }
  if (config.reference_n < 2 || config.reference_n % 2 != 0) {
    throw InvalidArgumentError("reference mesh size must be even and >= 2");
  }

  const auto kappa = [](Point) { return DiffusionTensor::identity(); };

  // Fine isoparametric reference, assembled once and solved per mesh size
  // with the coarse mesh's boundary trace, so every comparison refines the
  // same continuous problem.
  const Mesh ref_mesh = make_structured_quad_mesh(config.reference_n, config.reference_n);
  const SparseSystem ref_sys = assemble_global(ref_mesh, kappa, Scheme::iso_fem());

  std::vector<ResultRow> rows;
  for (int n : config.sizes) {
    const Mesh mesh = make_structured_quad_mesh(n, n);
    const auto g = checkerboard_boundary(mesh, config.amplitude);
    const double h = mean_cell_size(mesh);

    std::map<int, double> ref_g;
    for (int v : ref_mesh.boundary) {
      const Point p = ref_mesh.points[v];
      ref_g[v] = config.amplitude * checkerboard_wave(n * p.x) * checkerboard_wave(n * p.y);
    }
    const auto [ref_u, ref_report] = solve(apply_dirichlet(ref_sys, ref_g));
    (void)ref_report;
    const StructuredInterpolant reference(ref_mesh, ref_u);

    auto run_one = [&](const Scheme& scheme, double tau_label) {
      const auto [u, report] = solve(apply_dirichlet(assemble_global(mesh, kappa, scheme), g));
      (void)report;
      Eigen::VectorXd err(mesh.num_points());
      for (int v = 0; v < mesh.num_points(); ++v) err(v) = u(v) - reference(mesh.points[v]);

      ResultRow row;
      row.scheme = scheme.name();
      row.n = n;
      row.h_mean = h;
      row.tau = tau_label;
      row.interior_max = interior_max_abs(mesh, u, config.margin);
      row.linf_error = err.cwiseAbs().maxCoeff();
      rows.push_back(row);

      if (fields) {
        FieldSnapshot snap;
        char buf[96];
        if (scheme.kind == Scheme::Kind::IsoFem) {
          std::snprintf(buf, sizeof(buf), "hourglass_n%d_fem", n);
        } else {
          std::snprintf(buf, sizeof(buf), "hourglass_n%d_tau%g", n, tau_label);
        }
        snap.name = buf;
        snap.mesh = mesh;
        snap.u = u;
        snap.error = err;
        fields->push_back(std::move(snap));
      }
    };

    run_one(Scheme::iso_fem(), ResultRow::nan_value());
    for (double tau : config.taus) {
      run_one(Scheme::vem(TauPolicy::constant(tau)), tau);
    }
  }
  return rows;
}

MMSProblem mms_data() {
  MMSProblem p;
  p.exact = [](Point pt) {
    const double x = pt.x, y = pt.y;
    return x * x * x - x * y * y + x * x * y - x * y + x * x - x + y - 1.0 +
           std::sin(5.0 * x) * std::sin(7.0 * y) + std::log(1.0 + x * x + y * y * y * y);
  };
  p.exact_gradient = [](Point pt) {
    const double x = pt.x, y = pt.y;
    const double w = 1.0 + x * x + y * y * y * y;
    return Vec2{3.0 * x * x - y * y + 2.0 * x * y - y + 2.0 * x - 1.0 +
                    5.0 * std::cos(5.0 * x) * std::sin(7.0 * y) + 2.0 * x / w,
                -2.0 * x * y + x * x - x + 1.0 + 7.0 * std::sin(5.0 * x) * std::cos(7.0 * y) +
                    4.0 * y * y * y / w};
  };
  p.source = [](Point pt) {
    const double x = pt.x, y = pt.y;
    const double w = 1.0 + x * x + y * y * y * y;
    const double w2 = w * w;
    const double s5 = std::sin(5.0 * x), c5 = std::cos(5.0 * x);
    const double s7 = std::sin(7.0 * y), c7 = std::cos(7.0 * y);

    const double ux = 3.0 * x * x - y * y + 2.0 * x * y - y + 2.0 * x - 1.0 + 5.0 * c5 * s7 + 2.0 * x / w;
    const double uy = -2.0 * x * y + x * x - x + 1.0 + 7.0 * s5 * c7 + 4.0 * y * y * y / w;
    const double uxx = 6.0 * x + 2.0 * y + 2.0 - 25.0 * s5 * s7 + 2.0 / w - 4.0 * x * x / w2;
    const double uyy = -2.0 * x - 49.0 * s5 * s7 + 12.0 * y * y / w - 16.0 * std::pow(y, 6) / w2;
    const double uxy = -2.0 * y + 2.0 * x - 1.0 + 35.0 * c5 * c7 - 8.0 * x * y * y * y / w2;

    const double div = (1.0 + y * y) * uxx + (1.0 + x * x) * uyy - 2.0 * x * y * uxy - x * ux - y * uy;
    return -div;
  };
  p.kappa = [](Point pt) {
    const double x = pt.x, y = pt.y;
    return DiffusionTensor(1.0 + y * y, -x * y, 1.0 + x * x);
  };
  return p;
}

std::vector<ResultRow> run_mms(const MMSConfig& config, std::vector<FieldSnapshot>* fields) {
  if (config.sizes.empty()) throw InvalidArgumentError("mms study needs mesh sizes");
  if (config.schemes.empty()) throw InvalidArgumentError("mms study needs schemes");

  const MMSProblem problem = mms_data();

  std::vector<ResultRow> rows;
  for (const Scheme& scheme : config.schemes) {
    double prev_error = ResultRow::nan_value();
    double prev_h = ResultRow::nan_value();
    for (int n : config.sizes) {
      Mesh mesh = make_structured_quad_mesh(n, n);
      if (config.perturb_amplitude > 0.0) {
        mesh = perturb_mesh(mesh, config.perturb_amplitude, config.seed);
      }

      const auto sys = assemble_global(mesh, problem.kappa, scheme, problem.source);
      const auto [u, report] = solve(apply_dirichlet(sys, problem.exact), 1e-12);
      (void)report;

      Eigen::VectorXd err(mesh.num_points());
      for (int v = 0; v < mesh.num_points(); ++v) err(v) = u(v) - problem.exact(mesh.points[v]);

      ResultRow row;
      row.scheme = scheme.name();
      row.n = n;
      row.h_mean = mean_cell_size(mesh);
      if (scheme.kind == Scheme::Kind::Vem && scheme.policy.kind == TauPolicy::Kind::Constant) {
        row.tau = scheme.policy.value;
      }
      row.linf_error = err.cwiseAbs().maxCoeff();
      if (!std::isnan(prev_error)) {
        row.rate = std::log(prev_error / row.linf_error) / std::log(prev_h / row.h_mean);
      }
      prev_error = row.linf_error;
      prev_h = row.h_mean;
      rows.push_back(row);

      if (fields) {
        std::string name;
        snprintf_name(name, "mms_n%d_%s", n, scheme.name().c_str());
        fields->push_back({name, mesh, u, err});
      }
    }
  }
  return rows;
}

ElementReport inspect_element(const Quad& q, const DiffusionTensor& kappa,
                              std::span<const TauPolicy> policies) {
  ElementReport report;
  report.decomposition = decompose(q, kappa);
  report.expansion = gbc_expansion(q);
  report.convex = q.is_convex();

  for (const TauPolicy& policy : policies) {
    TauEntry entry;
    entry.policy = policy.name();
    try {
      entry.tau = tau_vem(kappa, policy, q.as_polygon());
      entry.ok = true;
      entry.stiffness = report.decomposition.A + entry.tau * report.decomposition.B;
    } catch (const Error& e) {
      entry.error = e.category() + ": " + e.what();
    }
    report.taus.push_back(std::move(entry));
  }

  try {
    const QuadratureRule rule = QuadratureRule::gauss(2);
    const Eigen::Matrix4d direct = fem_stiffness(q, kappa, rule);
    const double tau_quad = hourglass_energy(q, kappa, rule);
    const Eigen::Matrix4d recomposed =
        Eigen::Matrix4d(report.decomposition.A) + tau_quad * Eigen::Matrix4d(report.decomposition.B);
    report.quadrature_identity_residual = (direct - recomposed).cwiseAbs().maxCoeff();
  } catch (const InvalidMapError&) {
    report.quadrature_identity_residual.reset();
  }
  return report;
}

namespace {

void append_matrix(std::ostringstream& os, const char* label, const Eigen::MatrixXd& m) {
  os << label << " =\n";
  char buf[48];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "% .12g", m(i, j));
      os << buf << (j + 1 < m.cols() ? " " : "");
    }
    os << "\n";
  }
}

}  // namespace

std::string format_element_report(const ElementReport& report) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "area = %.12g   convex = %s\n", report.decomposition.area,
                report.convex ? "yes" : "no");
  os << buf;

  os << "gamma = [";
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof(buf), "% .12g%s", report.decomposition.gamma(i), i < 3 ? " " : "");
    os << buf;
  }
  os << "]\n";

  append_matrix(os, "A", report.decomposition.A);
  append_matrix(os, "B", report.decomposition.B);
  append_matrix(os, "C", report.decomposition.C);

  os << "basis expansion (a_i, b_i, c_i, hourglass_i):\n";
  for (int i = 0; i < 4; ++i) {
    std::snprintf(buf, sizeof(buf), "  phi_%d: % .12g % .12g % .12g % .12g\n", i + 1,
                  report.expansion.a[i], report.expansion.b[i], report.expansion.c[i],
                  report.expansion.hourglass[i]);
    os << buf;
  }

  for (const TauEntry& t : report.taus) {
    if (t.ok) {
      std::snprintf(buf, sizeof(buf), "tau[%s] = %.12g\n", t.policy.c_str(), t.tau);
      os << buf;
      append_matrix(os, ("K[" + t.policy + "]").c_str(), t.stiffness);
    } else {
      os << "tau[" << t.policy << "] unavailable (" << t.error << ")\n";
    }
  }

  if (report.quadrature_identity_residual.has_value()) {
    std::snprintf(buf, sizeof(buf), "quadrature identity residual = %.3e\n",
                  *report.quadrature_identity_residual);
    os << buf;
  } else {
    os << "quadrature identity residual unavailable (invalid bilinear map)\n";
  }
  return os.str();
}

}  // namespace hg
