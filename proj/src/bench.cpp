#include "biot_mortar/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace biot_mortar {

FieldGrid load_field(const std::string& path, int nx, int ny) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open field file '" + path + "'");
  FieldGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      throw InputError("field file '" + path + "': value " + std::to_string(grid.values.size() + 1) +
                       " is not a number ('" + token + "')");
    grid.values.push_back(v);
  }
  const std::size_t expected = static_cast<std::size_t>(nx) * ny;
  if (grid.values.size() != expected)
    throw InputError("field file '" + path + "': expected " + std::to_string(expected) + " values, found " +
                     std::to_string(grid.values.size()));
  return grid;
}

namespace {

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : rng_(seed) {}
  // Box-Muller on top of the raw 64-bit stream, so the sequence is identical on every platform.
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::vector<double> correlated_noise(NormalSource& src, int nx, int ny, int rx, int ry) {
  std::vector<double> white(static_cast<std::size_t>(nx) * ny);
  for (double& w : white) w = src.next();
  std::vector<double> tmp(white.size()), out(white.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int d = -rx; d <= rx; ++d) acc += white[j * nx + std::clamp(i + d, 0, nx - 1)];
      tmp[j * nx + i] = acc;
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double acc = 0.0;
      for (int d = -ry; d <= ry; ++d) acc += tmp[std::clamp(j + d, 0, ny - 1) * nx + i];
      out[j * nx + i] = acc;
    }
  double mean = 0.0, var = 0.0;
  for (double v : out) mean += v;
  mean /= out.size();
  for (double v : out) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / out.size());
  for (double& v : out) v = (v - mean) / sd;
  return out;
}

}  // namespace

BenchFields synthetic_fields(std::uint64_t seed, int nx, int ny) {
  NormalSource src(seed);
  const std::vector<double> g1 = correlated_noise(src, nx, ny, 3, 6);
  const std::vector<double> g2 = correlated_noise(src, nx, ny, 2, 2);
  BenchFields f;
  f.synthetic = true;
  f.permeability = {nx, ny, {}};
  f.porosity = {nx, ny, {}};
  for (std::size_t k = 0; k < g1.size(); ++k) {
    f.permeability.values.push_back(std::exp(1.5 * g1[k]));
    f.porosity.values.push_back(std::clamp(0.2 + 0.07 * (0.8 * g1[k] + 0.6 * g2[k]), 0.01, 0.45));
  }
  return f;
}

BenchFields load_fields(const std::string& permeability_path, const std::string& porosity_path, std::uint64_t seed,
                        double c_crit, int nx, int ny) {
  namespace fs = std::filesystem;
  const bool have = !permeability_path.empty() && !porosity_path.empty() && fs::exists(permeability_path) &&
                    fs::exists(porosity_path);
  BenchFields f;
  if (have) {
    f.permeability = load_field(permeability_path, nx, ny);
    f.porosity = load_field(porosity_path, nx, ny);
  } else {
    f = synthetic_fields(seed, nx, ny);
    f.warnings.push_back("field files not found; using synthetic fields with seed " + std::to_string(seed));
  }
  for (std::size_t k = 0; k < f.permeability.values.size(); ++k)
    if (!(f.permeability.values[k] > 0.0))
      throw InputError("non-positive permeability at cell " + std::to_string(k));
  int clamped = 0;
  for (std::size_t k = 0; k < f.porosity.values.size(); ++k) {
    double& phi = f.porosity.values[k];
    if (!(phi >= 0.0)) throw InputError("negative porosity at cell " + std::to_string(k));
    if (phi >= c_crit) {
      phi = c_crit - 1e-3;
      ++clamped;
    }
  }
  if (clamped > 0)
    f.warnings.push_back(std::to_string(clamped) + " porosity values at or above " + std::to_string(c_crit) +
                         " clamped");
  return f;
}

std::uint64_t field_checksum(const FieldGrid& grid) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : grid.values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

double youngs_modulus(double porosity, const BenchOptions& o) {
  return o.e_scale * std::pow(1.0 - porosity / o.c_crit, o.e_exponent);
}

MaterialField derive_materials(const BenchFields& fields, const DomainMeshes& meshes, const BenchOptions& o) {
  const double nu = o.poisson_ratio;
  if (!(nu >= 0.0 && nu < 0.5)) throw InputError("Poisson ratio must lie in [0, 0.5)");
  const FieldGrid& kf = fields.permeability;
  const double dx = (meshes.spec.x1 - meshes.spec.x0) / kf.nx;
  const double dy = (meshes.spec.y1 - meshes.spec.y0) / kf.ny;
  MaterialField m;
  m.c0 = o.c0;
  m.alpha = o.alpha;
  for (const SubdomainMesh& mesh : meshes.subdomains) {
    std::vector<CellMaterial> cells(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Vec2 x = mesh.cell_center(c);
      const int i = std::clamp(static_cast<int>((x.x - meshes.spec.x0) / dx), 0, kf.nx - 1);
      const int j = std::clamp(static_cast<int>((x.y - meshes.spec.y0) / dy), 0, kf.ny - 1);
      const double e = youngs_modulus(fields.porosity.at(i, j), o);
      if (!(e > o.e_floor))
        throw InputError("Young's modulus " + std::to_string(e) + " below the floor at field cell (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
      cells[c].mu = e / (2.0 * (1.0 + nu));
      cells[c].lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
      cells[c].k_xx = cells[c].k_yy = kf.at(i, j);
      cells[c].k_xy = 0.0;
    }
    m.cells.push_back(std::move(cells));
  }
  return m;
}

std::vector<MortarConfig> bench_mortar_configs() {
  return {{"fine", match_trace_grid, 1}, {"1lin", 1, 1}, {"1quad", 1, 2}, {"2lin", 2, 1}, {"2quad", 2, 2}};
}

MortarConfig bench_mortar_config(const std::string& name) {
  for (const MortarConfig& c : bench_mortar_configs())
    if (c.name == name) return c;
  throw InputError("unknown mortar configuration '" + name + "' (expected fine, 1lin, 1quad, 2lin or 2quad)");
}

DomainSpec bench_domain(const BenchFields& fields, const BenchOptions& o, const MortarConfig& config) {
  const int nx = fields.permeability.nx, ny = fields.permeability.ny;
  if (nx % o.blocks_x != 0 || ny % o.blocks_y != 0)
    throw InputError("field grid does not split evenly into the subdomain blocks");
  DomainSpec spec;
  spec.x1 = nx;
  spec.y1 = ny;
  spec.blocks_x = o.blocks_x;
  spec.blocks_y = o.blocks_y;
  spec.cells.assign(o.blocks_x * o.blocks_y, {nx / o.blocks_x, ny / o.blocks_y});
  spec.mortar_elements = config.elements;
  spec.mortar_degree = config.degree;
  return spec;
}

ProblemData bench_problem(const BenchOptions& o, double width) {
  ProblemData d = ProblemData::homogeneous();
  d.sides[index(Side::left)] = {MechanicsBc::traction, FlowBc::pressure};
  d.sides[index(Side::right)] = {MechanicsBc::displacement, FlowBc::pressure};
  d.sides[index(Side::bottom)] = {MechanicsBc::traction, FlowBc::flux};
  d.sides[index(Side::top)] = {MechanicsBc::traction, FlowBc::flux};
  const double alpha = o.alpha;
  // Traction -alpha p n on the left uses the prescribed boundary pressure p = 1.
  d.traction = [alpha](double x, double, double, Vec2 n) {
    if (x > 0.0) return Vec2{};
    return Vec2{-alpha * n.x, -alpha * n.y};
  };
  d.pressure = [](double x, double, double) { return x > 0.0 ? 0.0 : 1.0; };
  d.initial_pressure = [width](double x, double) { return 1.0 - x / width; };
  return d;
}

GlobalFields gather_fields(const DDSolver& solver) {
  const DomainMeshes& meshes = solver.meshes();
  GlobalFields g;
  g.x0 = meshes.spec.x0;
  g.y0 = meshes.spec.y0;
  double hx = 1e300, hy = 1e300;
  for (const SubdomainMesh& m : meshes.subdomains) {
    hx = std::min(hx, m.hx());
    hy = std::min(hy, m.hy());
  }
  g.nx = std::max(1, static_cast<int>(std::lround((meshes.spec.x1 - meshes.spec.x0) / hx)));
  g.ny = std::max(1, static_cast<int>(std::lround((meshes.spec.y1 - meshes.spec.y0) / hy)));
  g.dx = (meshes.spec.x1 - meshes.spec.x0) / g.nx;
  g.dy = (meshes.spec.y1 - meshes.spec.y0) / g.ny;
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
  g.pressure.assign(n, 0.0);
  g.velocity.assign(n, Vec2{});
  g.displacement_magnitude.assign(n, 0.0);
  const StepState& st = solver.state();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x0 + (i + 0.5) * g.dx, y = g.y0 + (j + 0.5) * g.dy;
      for (int s = 0; s < solver.n_subdomains(); ++s) {
        const SubdomainMesh& m = meshes.subdomains[s];
        if (x < m.x0() || x > m.x1() || y < m.y0() || y > m.y1()) continue;
        const int ci = std::clamp(static_cast<int>((x - m.x0()) / m.hx()), 0, m.nx() - 1);
        const int cj = std::clamp(static_cast<int>((y - m.y0()) / m.hy()), 0, m.ny() - 1);
        const int c = m.cell(ci, cj);
        const SubdomainDofLayout& lay = solver.layout(s);
        const Vector& xs = st.subdomains[s].x;
        const RectangleBDM1 fe(m.hx(), m.hy());
        const double xi = (x - m.x0()) / m.hx() - ci, eta = (y - m.y0()) / m.hy() - cj;
        const auto phi = fe.values(xi, eta);
        const auto dofs = lay.cell_bdm_dofs(m, c);
        Vec2 v;
        for (int a = 0; a < 8; ++a) {
          v.x += xs[lay.z(dofs[a])] * phi[a].x;
          v.y += xs[lay.z(dofs[a])] * phi[a].y;
        }
        const std::size_t k = static_cast<std::size_t>(j) * g.nx + i;
        g.pressure[k] = xs[lay.p(c)];
        g.velocity[k] = v;
        g.displacement_magnitude[k] = std::hypot(st.subdomains[s].u[c], st.subdomains[s].u[lay.n_cells + c]);
        break;
      }
    }
  }
  return g;
}

BenchRun run_bench(const BenchFields& fields, const BenchOptions& o, const MortarConfig& config, bool msb) {
  const DomainSpec spec = bench_domain(fields, o, config);
  DomainMeshes meshes = build_meshes(spec);
  MaterialField material = derive_materials(fields, meshes, o);
  SolverOptions so;
  so.dt = o.dt;
  so.gmres_tol = o.gmres_tol;
  so.use_msb = msb;
  DDSolver solver(std::move(meshes), std::move(material), bench_problem(o, spec.x1 - spec.x0), so);
  solver.initialize();
  BenchRun run;
  run.config = config.name;
  run.msb = msb;
  run.mortar_elements = config.elements;
  run.mortar_degree = config.degree;
  run.interface_dofs = solver.mortar().size();
  run.steps = o.steps;
  for (int n = 0; n < o.steps; ++n) {
    const StepReport r = solver.advance_step();
    run.gmres_per_step.push_back(r.gmres_iterations);
    run.gmres_total += r.gmres_iterations;
    run.gmres_max = std::max(run.gmres_max, r.gmres_iterations);
  }
  run.gmres_average = o.steps > 0 ? static_cast<double>(run.gmres_total) / o.steps : 0.0;
  const SolveCounts& counts = solver.solve_counts();
  run.solves_max = counts.max();
  run.solves_total = counts.total();
  run.msb_build_solves = counts.msb_build;
  run.initialization_solves = counts.initialization;
  const Vector r = solver.continuity_residual();
  run.continuity_residual = r.size() > 0 ? r.cwiseAbs().maxCoeff() : 0.0;
  run.fields = gather_fields(solver);
  return run;
}

double relative_l2_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError("fields have different sizes");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::string to_vtk(const GlobalFields& g, const std::string& title) {
  std::ostringstream out;
  char buf[128];
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << g.nx + 1 << ' ' << g.ny + 1 << " 1\n";
  out << "POINTS " << (g.nx + 1) * (g.ny + 1) << " double\n";
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g 0\n", g.x0 + i * g.dx, g.y0 + j * g.dy);
      out << buf;
    }
  out << "CELL_DATA " << g.nx * g.ny << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double p : g.pressure) {
    std::snprintf(buf, sizeof buf, "%.9g\n", p);
    out << buf;
  }
  out << "VECTORS velocity double\n";
  for (const Vec2& v : g.velocity) {
    std::snprintf(buf, sizeof buf, "%.9g %.9g 0\n", v.x, v.y);
    out << buf;
  }
  out << "SCALARS displacement_magnitude double 1\nLOOKUP_TABLE default\n";
  for (double d : g.displacement_magnitude) {
    std::snprintf(buf, sizeof buf, "%.9g\n", d);
    out << buf;
  }
  return out.str();
}

}  // namespace biot_mortar
