#include "biot_mortar/bench.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace biot_mortar;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("biot_mortar_test_" + name)).string();
}

void write_values(const std::string& path, const std::vector<double>& v) {
  std::ofstream out(path);
  out.precision(17);
  for (double x : v) out << x << '\n';
}

}  // namespace

TEST_CASE("synthetic fields are pinned, deterministic and in range") {
  const BenchFields a = synthetic_fields(42);
  CHECK(a.synthetic);
  CHECK(a.permeability.values.size() == 60u * 220u);
  CHECK(field_checksum(a.permeability) == 2136838490138161945ULL);
  CHECK(field_checksum(a.porosity) == 5985240706633363425ULL);
  const BenchFields b = synthetic_fields(42);
  CHECK(a.permeability.values == b.permeability.values);
  CHECK(field_checksum(synthetic_fields(43).permeability) != field_checksum(a.permeability));
  double kmin = 1e300, kmax = 0.0;
  for (double k : a.permeability.values) {
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  CHECK(kmin > 0.0);
  CHECK(kmax / kmin > 100.0);  // genuinely heterogeneous
  for (double phi : a.porosity.values) {
    CHECK(phi >= 0.01);
    CHECK(phi <= 0.45);
  }
}

TEST_CASE("field files: round trip and errors") {
  const std::string path = temp_path("field.txt");
  const BenchFields s = synthetic_fields(7, 4, 6);
  write_values(path, s.permeability.values);
  const FieldGrid g = load_field(path, 4, 6);
  CHECK(g.nx == 4);
  CHECK(g.values == s.permeability.values);
  CHECK(g.at(1, 2) == s.permeability.values[2 * 4 + 1]);
  CHECK_THROWS_AS(load_field(path, 5, 6), InputError);
  CHECK_THROWS_AS(load_field(temp_path("missing.txt"), 4, 6), InputError);
  {
    std::ofstream out(path);
    out << "1 2 x 4\n";
  }
  CHECK_THROWS_WITH_AS(load_field(path, 2, 2), doctest::Contains("value 3 is not a number"), InputError);
  std::filesystem::remove(path);
}

TEST_CASE("load_fields falls back to synthetic data and clamps porosity") {
  const BenchFields f = load_fields("", "", 42);
  CHECK(f.synthetic);
  REQUIRE(f.warnings.size() == 1);
  CHECK(f.warnings[0].find("synthetic") != std::string::npos);
  CHECK(field_checksum(f.permeability) == 2136838490138161945ULL);

  const std::string kp = temp_path("k.txt"), pp = temp_path("phi.txt");
  write_values(kp, {1.0, 2.0, 3.0, 4.0});
  write_values(pp, {0.1, 0.5, 0.7, 0.2});
  const BenchFields g = load_fields(kp, pp, 42, 0.5, 2, 2);
  CHECK_FALSE(g.synthetic);
  CHECK(g.porosity.values == std::vector<double>{0.1, 0.499, 0.499, 0.2});
  REQUIRE(g.warnings.size() == 1);
  CHECK(g.warnings[0].find("2 porosity values") == 0);

  write_values(kp, {1.0, 0.0, 3.0, 4.0});
  CHECK_THROWS_AS(load_fields(kp, pp, 42, 0.5, 2, 2), InputError);
  write_values(kp, {1.0, 2.0, 3.0, 4.0});
  write_values(pp, {0.1, -0.1, 0.2, 0.2});
  CHECK_THROWS_AS(load_fields(kp, pp, 42, 0.5, 2, 2), InputError);
  std::filesystem::remove(kp);
  std::filesystem::remove(pp);
}

TEST_CASE("material derivation follows the porosity law and Lame formulas") {
  BenchOptions o;
  CHECK(youngs_modulus(0.0, o) == doctest::Approx(100.0));
  CHECK(youngs_modulus(0.25, o) == doctest::Approx(100.0 * std::pow(0.5, 2.1)));
  CHECK(youngs_modulus(0.5, o) == 0.0);

  const BenchFields f = synthetic_fields(3, 6, 10);
  DomainSpec spec = bench_domain(f, o, bench_mortar_config("1lin"));
  CHECK(spec.x1 == 6.0);
  CHECK(spec.y1 == 10.0);
  CHECK(spec.cells[0] == std::array<int, 2>{2, 2});
  const DomainMeshes meshes = build_meshes(spec);
  const MaterialField m = derive_materials(f, meshes, o);
  REQUIRE(m.cells.size() == 15);
  const SubdomainMesh& mesh = meshes.subdomains[4];
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 x = mesh.cell_center(c);
    const int i = static_cast<int>(x.x), j = static_cast<int>(x.y);
    const double e = youngs_modulus(f.porosity.at(i, j), o), nu = o.poisson_ratio;
    const CellMaterial& cm = m.cells[4][c];
    CHECK(cm.mu == doctest::Approx(e / (2 * (1 + nu))));
    CHECK(cm.lambda == doctest::Approx(e * nu / ((1 + nu) * (1 - 2 * nu))));
    // Recover E and nu from the Lame pair.
    CHECK(cm.mu * (3 * cm.lambda + 2 * cm.mu) / (cm.lambda + cm.mu) == doctest::Approx(e));
    CHECK(cm.lambda / (2 * (cm.lambda + cm.mu)) == doctest::Approx(nu));
    CHECK(cm.k_xx == f.permeability.at(i, j));
    CHECK(cm.k_xy == 0.0);
  }
  o.poisson_ratio = 0.5;
  CHECK_THROWS_AS(derive_materials(f, meshes, o), InputError);
  o.poisson_ratio = 0.2;
  o.blocks_x = 4;
  CHECK_THROWS_AS(bench_domain(f, o, bench_mortar_config("fine")), InputError);
}

TEST_CASE("mortar configurations") {
  const auto all = bench_mortar_configs();
  REQUIRE(all.size() == 5);
  CHECK(all[0].elements == match_trace_grid);
  CHECK(bench_mortar_config("2quad").elements == 2);
  CHECK(bench_mortar_config("2quad").degree == 2);
  CHECK_THROWS_AS(bench_mortar_config("3lin"), InputError);
}

TEST_CASE("small benchmark run: accounting, MSB agreement and output") {
  const BenchFields f = synthetic_fields(5, 6, 10);
  BenchOptions o;
  o.steps = 3;
  o.gmres_tol = 1e-10;
  const BenchRun direct = run_bench(f, o, bench_mortar_config("1lin"), false);
  const BenchRun msb = run_bench(f, o, bench_mortar_config("1lin"), true);
  CHECK(direct.gmres_per_step.size() == 3u);
  CHECK(direct.gmres_per_step == msb.gmres_per_step);
  CHECK(direct.interface_dofs == 22 * 3 * 2);  // 22 interfaces, 3 components, linear
  CHECK(msb.msb_build_solves > 0);
  CHECK(direct.msb_build_solves == 0);
  CHECK(msb.solves_max < direct.solves_max);
  CHECK(msb.continuity_residual < 1e-8);
  CHECK(relative_l2_difference(msb.fields.pressure, direct.fields.pressure) < 1e-8);

  const GlobalFields& g = direct.fields;
  CHECK(g.nx == 6);
  CHECK(g.ny == 10);
  for (double p : g.pressure) CHECK(std::isfinite(p));
  // Flow runs from the left boundary (p = 1) to the right (p = 0).
  CHECK(g.pressure[0] > g.pressure[5]);
  CHECK(g.velocity[2].x > 0.0);

  const std::string vtk = to_vtk(g, "test");
  CHECK(vtk.rfind("# vtk DataFile Version 3.0\ntest\nASCII\nDATASET STRUCTURED_GRID\n", 0) == 0);
  CHECK(vtk.find("DIMENSIONS 7 11 1") != std::string::npos);
  CHECK(vtk.find("POINTS 77 double") != std::string::npos);
  CHECK(vtk.find("CELL_DATA 60") != std::string::npos);
  std::istringstream lines(vtk);
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == 4 + 2 + 77 + 3 + 60 + 1 + 60 + 2 + 60);
}

TEST_CASE("relative L2 difference") {
  CHECK(relative_l2_difference({3.0, 4.0}, {3.0, 4.0}) == 0.0);
  CHECK(relative_l2_difference({3.0, 5.0}, {3.0, 4.0}) == doctest::Approx(0.2));
  CHECK(relative_l2_difference({1.0}, {0.0}) == 1.0);
  CHECK_THROWS_AS(relative_l2_difference({1.0}, {1.0, 2.0}), InputError);
}
