#pragma once

#include "biot_mortar/ddsolver.hpp"
#include "biot_mortar/problem.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace biot_mortar {

/// Closed-form solution on the unit square with K = I:
///   p = e^t (sin(pi x) cos(pi y) + 10),
///   u = e^t (x^3 y^4 + x^2 + sin((1-x)(1-y)) cos(1-y), (1-x)^4 (1-y)^3 + (1-y)^2 + cos(x y) sin(x)).
/// sigma = 2 mu eps(u) + lambda div(u) I - alpha p I, z = -grad p, f = -div sigma,
/// g = d/dt (c0 p + alpha div u) + div z.
struct ManufacturedSolution {
  double mu = 100.0;
  double lambda = 100.0;
  double alpha = 1.0;
  double c0 = 1.0;

  double p(double x, double y, double t) const;
  Vec2 grad_p(double x, double y, double t) const;
  Vec2 u(double x, double y, double t) const;
  Mat2 grad_u(double x, double y, double t) const;  // (du_i/dx_j)
  Mat2 sigma(double x, double y, double t) const;
  Vec2 div_sigma(double x, double y, double t) const;
  /// r with gamma = [[0, r], [-r, 0]] the skew part of grad u.
  double rotation(double x, double y, double t) const;
  Vec2 z(double x, double y, double t) const;
  double div_z(double x, double y, double t) const;
  Vec2 f(double x, double y, double t) const;
  double g(double x, double y, double t) const;

  /// Named evaluation: "p", "u", "sigma" (row-major), "gamma", "z", "f", "g", "div_sigma", "div_z".
  std::vector<double> eval(const std::string& quantity, double x, double y, double t) const;

  /// Displacement and pressure data on every side of the unit square.
  ProblemData problem() const;
};

inline constexpr int n_tracked = 9;
/// sigma, div sigma, gamma, u, z, div z, p, lambda_u, lambda_p
extern const std::array<const char*, n_tracked> tracked_names;

/// Relative space-time errors of a run against an exact solution: L-infinity in time over
/// t_1..t_N for all quantities except div z, which uses L2 in time.
class ErrorAccumulator {
 public:
  explicit ErrorAccumulator(const ManufacturedSolution& exact, int quadrature_order = 3)
      : exact_(exact), order_(quadrature_order) {}

  void add(const DDSolver& solver);
  std::array<double, n_tracked> relative() const;
  int samples() const { return samples_; }

 private:
  ManufacturedSolution exact_;
  int order_;
  int samples_ = 0;
  std::array<double, n_tracked> err_max_{}, ref_max_{}, err_sq_{}, ref_sq_{};
};

struct ConvergenceOptions {
  int degree = 1;  // 1: H = 2h; 2: H = sqrt(h)
  double c0 = 1.0;
  double dt = 1e-4;
  int steps = 100;
  int levels = 4;
  bool use_msb = true;
  double gmres_tol = 1e-6;
};

/// Checkerboard 2x2 decomposition of the unit square with 1/4 : 1/6 block mesh sizes at level 0.
DomainSpec convergence_domain(int degree, int level);
/// Nominal mesh size of a level: the size of the coarser block grids.
double convergence_h(int degree, int level);

struct ConvergenceRow {
  double h = 0.0;
  int gmres = 0;  // largest per-step iteration count
  std::array<double, n_tracked> errors{};
  std::array<double, n_tracked> rates{};  // NaN on the first row
};

struct RateTable {
  std::vector<ConvergenceRow> rows;
  std::string to_csv() const;
};

inline constexpr const char* rate_table_header =
    "h,gmres,e_sigma,r_sigma,e_divsigma,r_divsigma,e_gamma,r_gamma,e_u,r_u,e_z,r_z,e_divz,r_divz,e_p,r_p,e_lamu,r_"
    "lamu,e_lamp,r_lamp";

/// Runs one manufactured-solution simulation and returns its table row (rates unset).
ConvergenceRow run_manufactured(const DomainSpec& spec, const ManufacturedSolution& exact, double dt, int steps,
                                bool use_msb, double gmres_tol);

/// Refinement ladder; `progress` receives each finished row.
RateTable run_convergence(const ConvergenceOptions& options,
                          const std::function<void(const ConvergenceRow&)>& progress = {});

}  // namespace biot_mortar
