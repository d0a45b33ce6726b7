#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hourglass/errors.hpp"
#include "hourglass/io.hpp"

using namespace hg;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("csv round trip") {
  std::vector<ResultRow> rows(2);
  rows[0].scheme = "fem";
  rows[0].n = 20;
  rows[0].h_mean = 0.07071067811865475;
  rows[0].linf_error = 3.6e-2;
  rows[1].scheme = "vem-trace";
  rows[1].n = 20;
  rows[1].h_mean = 0.07071067811865475;
  rows[1].tau = 1.0;
  rows[1].linf_error = 2.4e-2;
  rows[1].rate = 1.987654321;

  auto path = temp_file("hourglass_rows.csv");
  write_csv(path, rows);
  auto back = read_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].scheme == "fem");
  CHECK(back[0].n == 20);
  CHECK(back[0].h_mean == rows[0].h_mean);
  CHECK(std::isnan(back[0].tau));
  CHECK(std::isnan(back[0].rate));
  CHECK(back[1].tau == 1.0);
  CHECK(back[1].rate == rows[1].rate);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(write_csv(temp_file("empty.csv"), std::vector<ResultRow>{}),
                  InvalidArgumentError);
}

TEST_CASE("vtk writer emits a well-formed legacy unstructured grid") {
  Mesh m = make_structured_quad_mesh(2, 2);
  Eigen::VectorXd u(m.num_points());
  for (int v = 0; v < m.num_points(); ++v) u(v) = v;
  const std::pair<std::string, Eigen::VectorXd> fields[] = {{"u", u}};

  auto path = temp_file("hourglass_mesh.vtk");
  write_vtk(path, m, fields);

  std::ifstream is(path);
  REQUIRE(is.good());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  std::getline(is, line);  // title
  std::getline(is, line);
  CHECK(line == "ASCII");
  std::getline(is, line);
  CHECK(line == "DATASET UNSTRUCTURED_GRID");
  std::getline(is, line);
  CHECK(line == "POINTS 9 double");

  int type9 = 0;
  bool saw_point_data = false, saw_scalars = false;
  while (std::getline(is, line)) {
    if (line == "9") ++type9;
    if (line == "POINT_DATA 9") saw_point_data = true;
    if (line == "SCALARS u double 1") saw_scalars = true;
  }
  CHECK(type9 == 4);  // one VTK_QUAD tag per cell
  CHECK(saw_point_data);
  CHECK(saw_scalars);
  std::filesystem::remove(path);

  Eigen::VectorXd bad(3);
  const std::pair<std::string, Eigen::VectorXd> bad_fields[] = {{"u", bad}};
  CHECK_THROWS_AS(write_vtk(temp_file("bad.vtk"), m, bad_fields), InvalidArgumentError);
}

TEST_CASE("experiment reruns produce bit-identical csv") {
  auto read_all = [](const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  };

  MMSConfig mms;
  mms.sizes = {4, 8};
  mms.perturb_amplitude = 0.3;
  mms.seed = 7;
  auto a = temp_file("mms_a.csv"), b = temp_file("mms_b.csv");
  write_csv(a, run_mms(mms));
  write_csv(b, run_mms(mms));
  CHECK(read_all(a) == read_all(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);

  HourglassConfig hour;
  hour.sizes = {8};
  hour.taus = {0.5};
  hour.reference_n = 16;
  write_csv(a, run_hourglass(hour));
  write_csv(b, run_hourglass(hour));
  CHECK(read_all(a) == read_all(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("mesh json round trip is exact") {
  Mesh m = perturb_mesh(make_structured_quad_mesh(5, 4, Rect{0.0, 0.0, 2.0, 1.0}), 0.3, 123);
  auto path = temp_file("hourglass_mesh.json");
  write_mesh_json(path, m);
  Mesh back = read_mesh_json(path);

  REQUIRE(back.num_points() == m.num_points());
  for (int v = 0; v < m.num_points(); ++v) {
    CHECK(back.points[v].x == m.points[v].x);
    CHECK(back.points[v].y == m.points[v].y);
  }
  CHECK(back.cells == m.cells);
  CHECK(back.boundary == m.boundary);
  CHECK(back.provenance.generator == "perturbed");
  CHECK(back.provenance.nx == 5);
  CHECK(back.provenance.seed == 123);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_mesh_json(temp_file("missing_mesh.json")), IoError);

  auto bad = temp_file("bad_mesh.json");
  std::ofstream(bad) << "{\"points\": [[0,0],[1,0]], \"cells\": [[0,1,5]], \"boundary\": []}";
  CHECK_THROWS_AS(read_mesh_json(bad), GeometryError);
  std::filesystem::remove(bad);
}
