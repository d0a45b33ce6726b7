#include "hourglass/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hourglass/errors.hpp"

namespace hg {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  if (field.empty()) return ResultRow::nan_value();
  return std::stod(field);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

void write_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
  if (rows.empty()) throw InvalidArgumentError("refusing to write an empty result table");
  std::ofstream os = open_out(path);
  os << "scheme,n,h_mean,tau,Linf_error,interior_max,rate\n";
  for (const ResultRow& r : rows) {
    os << r.scheme << ',' << r.n << ',' << format_double(r.h_mean) << ',' << format_double(r.tau)
       << ',' << format_double(r.linf_error) << ',' << format_double(r.interior_max) << ','
       << format_double(r.rate) << '\n';
  }
  if (!os) throw IoError("failed while writing " + path.string());
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty csv " + path.string());
  if (line != "scheme,n,h_mean,tau,Linf_error,interior_max,rate") {
    throw IoError("unexpected csv header in " + path.string());
  }
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    fields.resize(7);
    ResultRow r;
    r.scheme = fields[0];
    r.n = std::stoi(fields[1]);
    r.h_mean = parse_double(fields[2]);
    r.tau = parse_double(fields[3]);
    r.linf_error = parse_double(fields[4]);
    r.interior_max = parse_double(fields[5]);
    r.rate = parse_double(fields[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               std::span<const std::pair<std::string, Eigen::VectorXd>> point_fields) {
  for (const auto& [name, values] : point_fields) {
    if (values.size() != mesh.num_points()) {
      throw InvalidArgumentError("vtk field '" + name + "' size does not match point count");
    }
  }

  std::ofstream os = open_out(path);
  os << "# vtk DataFile Version 3.0\n";
  os << "hourglass output\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";

  char buf[96];
  os << "POINTS " << mesh.num_points() << " double\n";
  for (const Point& p : mesh.points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g 0\n", p.x, p.y);
    os << buf;
  }

  std::size_t list_size = 0;
  for (const auto& cell : mesh.cells) list_size += cell.size() + 1;
  os << "CELLS " << mesh.num_cells() << ' ' << list_size << '\n';
  for (const auto& cell : mesh.cells) {
    os << cell.size();
    for (int id : cell) os << ' ' << id;
    os << '\n';
  }

  os << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (const auto& cell : mesh.cells) {
    os << (cell.size() == 4 ? 9 : 7) << '\n';  // VTK_QUAD : VTK_POLYGON
  }

  if (!point_fields.empty()) {
    os << "POINT_DATA " << mesh.num_points() << '\n';
    for (const auto& [name, values] : point_fields) {
      os << "SCALARS " << name << " double 1\n";
      os << "LOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", values(i));
        os << buf;
      }
    }
  }
  if (!os) throw IoError("failed while writing " + path.string());
}

void write_snapshots(const std::filesystem::path& dir, std::span<const FieldSnapshot> snapshots) {
  std::filesystem::create_directories(dir);
  for (const FieldSnapshot& snap : snapshots) {
    const std::pair<std::string, Eigen::VectorXd> fields[] = {{"u", snap.u}, {"error", snap.error}};
    write_vtk(dir / (snap.name + ".vtk"), snap.mesh, fields);
  }
}

void write_mesh_json(const std::filesystem::path& path, const Mesh& mesh) {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const Point& p : mesh.points) j["points"].push_back({p.x, p.y});
  j["cells"] = mesh.cells;
  j["boundary"] = mesh.boundary;
  j["meta"] = {
      {"generator", mesh.provenance.generator},
      {"nx", mesh.provenance.nx},
      {"ny", mesh.provenance.ny},
      {"domain", {mesh.provenance.domain.x0, mesh.provenance.domain.y0, mesh.provenance.domain.x1,
                  mesh.provenance.domain.y1}},
      {"amplitude", mesh.provenance.amplitude},
      {"seed", mesh.provenance.seed},
  };
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
  if (!os) throw IoError("failed while writing " + path.string());
}

Mesh read_mesh_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid mesh json " + path.string() + ": " + e.what());
  }

  Mesh m;
  try {
    for (const auto& p : j.at("points")) m.points.push_back({p.at(0), p.at(1)});
    m.cells = j.at("cells").get<std::vector<std::vector<int>>>();
    m.boundary = j.at("boundary").get<std::vector<int>>();
    if (j.contains("meta")) {
      const auto& meta = j["meta"];
      m.provenance.generator = meta.value("generator", std::string("file"));
      m.provenance.nx = meta.value("nx", 0);
      m.provenance.ny = meta.value("ny", 0);
      if (meta.contains("domain")) {
        const auto& d = meta["domain"];
        m.provenance.domain = Rect{d.at(0), d.at(1), d.at(2), d.at(3)};
      }
      m.provenance.amplitude = meta.value("amplitude", 0.0);
      m.provenance.seed = meta.value("seed", std::uint64_t{0});
    } else {
      m.provenance.generator = "file";
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("invalid mesh json " + path.string() + ": " + e.what());
  }
  validate(m);
  return m;
}

}  // namespace hg
