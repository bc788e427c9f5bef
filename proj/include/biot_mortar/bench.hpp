#pragma once

#include "biot_mortar/ddsolver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace biot_mortar {

/// Cell-centred scalar data on an nx x ny grid, row-major with x fastest.
struct FieldGrid {
  int nx = 60;
  int ny = 220;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

struct BenchFields {
  FieldGrid permeability;
  FieldGrid porosity;
  bool synthetic = false;
  std::vector<std::string> warnings;
};

/// Reads nx*ny whitespace-separated values. Throws InputError on a missing file or wrong count.
FieldGrid load_field(const std::string& path, int nx = 60, int ny = 220);

/// Deterministic heterogeneous fields: correlated log-normal permeability and porosity.
BenchFields synthetic_fields(std::uint64_t seed, int nx = 60, int ny = 220);

/// Loads both files, or falls back to synthetic_fields(seed) with a warning when either path
/// is empty or missing. Validates k > 0 and clamps porosity >= c_crit to c_crit - 1e-3.
BenchFields load_fields(const std::string& permeability_path, const std::string& porosity_path, std::uint64_t seed,
                        double c_crit = 0.5, int nx = 60, int ny = 220);

/// FNV-1a hash of the IEEE-754 bit patterns of the values.
std::uint64_t field_checksum(const FieldGrid& grid);

struct BenchOptions {
  double poisson_ratio = 0.2;
  double c0 = 1.0;
  double alpha = 1.0;
  double dt = 1e-3;
  int steps = 100;
  double c_crit = 0.5;
  double e_scale = 100.0;
  double e_exponent = 2.1;
  double e_floor = 1e-6;
  double gmres_tol = 1e-6;
  int blocks_x = 3;
  int blocks_y = 5;
};

/// Young's modulus E = e_scale (1 - phi / c_crit)^e_exponent.
double youngs_modulus(double porosity, const BenchOptions& options);

/// Per-cell Lame parameters and K = k I for decomposed meshes that cover the field grid.
MaterialField derive_materials(const BenchFields& fields, const DomainMeshes& meshes, const BenchOptions& options);

struct MortarConfig {
  std::string name;
  int elements = 1;  // match_trace_grid for the fine-scale configuration
  int degree = 1;
};

/// fine, 1lin, 1quad, 2lin, 2quad
std::vector<MortarConfig> bench_mortar_configs();
MortarConfig bench_mortar_config(const std::string& name);

DomainSpec bench_domain(const BenchFields& fields, const BenchOptions& options, const MortarConfig& config);
/// Flow driven from left (p = 1, traction -alpha n) to right (u = 0, p = 0); no-flow, traction-free top and bottom.
ProblemData bench_problem(const BenchOptions& options, double width);

/// Cell data of a finished run on the global field grid.
struct GlobalFields {
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, dx = 1, dy = 1;
  std::vector<double> pressure;
  std::vector<Vec2> velocity;
  std::vector<double> displacement_magnitude;
};

GlobalFields gather_fields(const DDSolver& solver);

struct BenchRun {
  std::string config;
  bool msb = false;
  int mortar_elements = 0;
  int mortar_degree = 1;
  int interface_dofs = 0;
  int steps = 0;
  long gmres_total = 0;
  int gmres_max = 0;
  double gmres_average = 0.0;
  std::vector<int> gmres_per_step;
  long solves_max = 0;
  long solves_total = 0;
  long msb_build_solves = 0;
  long initialization_solves = 0;
  double continuity_residual = 0.0;
  GlobalFields fields;
};

BenchRun run_bench(const BenchFields& fields, const BenchOptions& options, const MortarConfig& config, bool msb);

/// Relative L2 difference of two pressure fields on the same grid.
double relative_l2_difference(const std::vector<double>& a, const std::vector<double>& b);

/// Legacy VTK ASCII structured grid with pressure, velocity and displacement magnitude as cell data.
std::string to_vtk(const GlobalFields& fields, const std::string& title);

}  // namespace biot_mortar
