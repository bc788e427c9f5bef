#pragma once

#include "biot_mortar/bench.hpp"
#include "biot_mortar/ddsolver.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace biot_mortar {

inline constexpr int run_config_schema_version = 1;

/// Constant boundary data for one side. Only the entries matching the side's condition types are used.
struct SideConfig {
  SideBc bc;
  Vec2 displacement;
  Vec2 traction;
  double pressure = 0.0;
  double flux = 0.0;
};

struct MaterialConfig {
  enum class Kind { uniform, fields } kind = Kind::uniform;
  // uniform
  double mu = 100.0;
  double lambda = 100.0;
  std::array<double, 3> permeability{1.0, 0.0, 1.0};  // k_xx, k_xy, k_yy
  // fields: per-cell permeability and porosity on a grid covering the domain
  std::string permeability_file;
  std::string porosity_file;
  int grid_nx = 60;
  int grid_ny = 220;
  double poisson_ratio = 0.2;
  double e_scale = 100.0;
  double e_exponent = 2.1;
  double c_crit = 0.5;
};

struct RunConfig {
  int schema_version = run_config_schema_version;
  DomainSpec domain;
  MaterialConfig material;
  double c0 = 1.0;
  double alpha = 1.0;
  double dt = 1e-3;
  int steps = 1;
  std::array<SideConfig, 4> sides{};
  Vec2 body_force;
  double fluid_source = 0.0;
  std::array<double, 3> initial_pressure{0.0, 0.0, 0.0};  // a + b x + c y
  bool use_msb = false;
  double gmres_tol = 1e-6;
  int gmres_max_it = 0;
  std::string metrics_path;
  std::string vtk_path;
  std::uint64_t seed = 42;
};

/// Parses and validates a RunConfig. Unknown keys, missing required keys, wrong types and
/// out-of-range values throw InputError; JSON syntax errors report line and column.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

ProblemData make_problem(const RunConfig& config);

/// Meshes, material and solver for a config, not yet initialized. Field-file warnings and
/// whether synthetic fields were used are reported through the optional outputs.
std::unique_ptr<DDSolver> build_solver(const RunConfig& config, std::vector<std::string>* warnings = nullptr,
                                       bool* synthetic = nullptr);

struct RunResult {
  std::string metrics_json;
  std::string vtk;
  std::vector<std::string> warnings;
};

/// Runs the configured simulation. Metrics contain no timing data, so identical configs give identical bytes.
RunResult run_simulation(const RunConfig& config);

}  // namespace biot_mortar
