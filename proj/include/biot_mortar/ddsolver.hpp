#pragma once

#include "biot_mortar/assembly.hpp"
#include "biot_mortar/fem.hpp"
#include "biot_mortar/linalg.hpp"
#include "biot_mortar/mesh.hpp"
#include "biot_mortar/mortar.hpp"
#include "biot_mortar/problem.hpp"

#include <memory>
#include <vector>

namespace biot_mortar {

struct SolverOptions {
  double dt = 1e-3;
  double gmres_tol = 1e-6;
  int gmres_max_it = 0;  // 0: interface dimension
  bool use_msb = false;
};

/// Fields of one subdomain at one time level.
struct SubdomainState {
  Vector x;         // five-field coefficients; the udot and rotation slots hold the last rates
  Vector u;         // displacement per cell, x components then y components
  Vector rotation;  // accumulated rotation r per cell
};

struct StepState {
  int step = 0;
  double time = 0.0;
  std::vector<SubdomainState> subdomains;
  /// Mortar vector with accumulated displacement in the displacement components and the
  /// current pressure in the pressure components.
  Vector lambda;
  /// Last interface solution: displacement rate and pressure components.
  Vector lambda_rate;
};

/// Cached interface responses of every subdomain to each of its mortar basis functions.
struct MultiscaleBasis {
  double dt = 0.0;
  std::vector<std::vector<int>> indices;  // global mortar indices per subdomain
  std::vector<DenseMatrix> responses;     // column k: response to unit datum indices[s][k]
};

struct SolveCounts {
  std::vector<long> per_subdomain;  // stepping solves, including MSB construction
  long initialization = 0;          // solves spent computing the initial state
  long msb_build = 0;               // solves spent constructing the basis (max over subdomains)
  long max() const;
  long total() const;
};

struct StepReport {
  int gmres_iterations = 0;
  std::vector<double> residuals;
};

/// Multiscale mortar domain decomposition solver for the five-field Biot system.
///
/// Each subdomain matrix is factorized once. A time step solves the interface problem
/// A_H lambda = G_H with GMRES, where every application of A_H costs one Dirichlet solve
/// per subdomain, or none once a multiscale basis has been built.
class DDSolver {
 public:
  DDSolver(DomainMeshes meshes, MaterialField material, ProblemData problem, SolverOptions options);
  ~DDSolver();
  DDSolver(const DDSolver&) = delete;
  DDSolver& operator=(const DDSolver&) = delete;

  const DomainMeshes& meshes() const { return meshes_; }
  const MortarSpace& mortar() const { return mortar_; }
  const MaterialField& material() const { return material_; }
  const ProblemData& problem() const { return problem_; }
  const SolverOptions& options() const { return options_; }
  int n_subdomains() const { return static_cast<int>(meshes_.subdomains.size()); }
  const SubdomainDofLayout& layout(int s) const;
  const StepState& state() const { return state_; }
  void set_state(StepState state) { state_ = std::move(state); }
  const SolveCounts& solve_counts() const { return counts_; }
  const std::vector<StepReport>& reports() const { return reports_; }
  const std::vector<TraceProjection>& projections(int s) const;

  /// p_h^0 from cell averages of the initial pressure, (sigma, u, gamma) and the displacement
  /// mortar from an elasticity-only interface problem, z from the Darcy equations.
  void initialize();
  StepReport advance_step();

  /// A_H lambda: project, solve star problems, project back, sum over subdomains.
  Vector interface_apply(const Vector& lambda);
  /// G_H at the next time level for the current state.
  Vector interface_rhs();
  void build_msb();
  bool has_msb() const { return msb_ != nullptr; }
  const MultiscaleBasis& msb() const;
  /// Linear combination of cached responses. Throws InputError for a basis built at another dt.
  Vector msb_apply(const MultiscaleBasis& basis, const Vector& lambda) const;

  /// Star problem of one subdomain: interface data lambda, all other data zero.
  Vector solve_star(int s, const Vector& lambda);
  /// Bar problem of one subdomain for the next time level: true data, zero interface data.
  Vector solve_bar(int s);
  /// Right-hand side of the bar problem (with essential values applied).
  Vector bar_rhs(int s) const;
  /// Interface response (Q^T sigma n, -Q^T z.n) of a subdomain solution, scattered into a mortar vector.
  Vector response(int s, const Vector& x) const;
  /// Step matrix of one subdomain with essential rows replaced by identity rows.
  const SparseMatrix& step_matrix(int s) const;

  /// Per mortar basis function: sum over subdomains of <sigma n, mu> (displacement components)
  /// and <z.n, mu> (pressure component) for the current state.
  Vector continuity_residual() const;

 private:
  struct Subdomain;
  Vector subdomain_response(int s, const Vector& x, bool include_flow) const;
  Vector star_solve_impl(int s, const Vector& lambda, bool elasticity);
  void count(int s, long n = 1) { counts_.per_subdomain[s] += n; }

  DomainMeshes meshes_;
  MaterialField material_;
  ProblemData problem_;
  SolverOptions options_;
  MortarSpace mortar_;
  std::vector<std::unique_ptr<Subdomain>> subs_;
  std::unique_ptr<MultiscaleBasis> msb_;
  StepState state_;
  SolveCounts counts_;
  std::vector<StepReport> reports_;
  bool counting_init_ = false;
};

}  // namespace biot_mortar
