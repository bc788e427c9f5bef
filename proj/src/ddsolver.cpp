#include "biot_mortar/ddsolver.hpp"

#include "biot_mortar/parallel.hpp"
#include "biot_mortar/quadrature.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace biot_mortar {

long SolveCounts::max() const {
  return per_subdomain.empty() ? 0 : *std::max_element(per_subdomain.begin(), per_subdomain.end());
}

long SolveCounts::total() const { return std::accumulate(per_subdomain.begin(), per_subdomain.end(), 0L); }

struct DDSolver::Subdomain {
  const SubdomainMesh* mesh = nullptr;
  SubdomainDofLayout layout;
  SparseMatrix raw;
  SparseMatrix matrix;
  SparseMatrix history;
  std::unique_ptr<Factorization> lu;
  std::vector<TraceProjection> links;
  std::vector<int> link_offsets;  // position of each link's block inside basis
  std::vector<int> basis;         // global mortar indices on this subdomain's interfaces
  // Elasticity-only system used by initialize().
  std::unique_ptr<Factorization> elasticity_lu;

  explicit Subdomain(const SubdomainMesh& m) : mesh(&m), layout(m) {}
};

DDSolver::DDSolver(DomainMeshes meshes, MaterialField material, ProblemData problem, SolverOptions options)
    : meshes_(std::move(meshes)),
      material_(std::move(material)),
      problem_(std::move(problem)),
      options_(options),
      mortar_(meshes_) {
  if (!(options_.dt > 0.0)) throw InputError("time step must be positive");
  if (!(options_.gmres_tol > 0.0)) throw InputError("GMRES tolerance must be positive");
  material_.validate(meshes_);
  const int n = n_subdomains();
  subs_.resize(n);
  counts_.per_subdomain.assign(n, 0);
  parallel_for(n, [&](int s) {
    auto sub = std::make_unique<Subdomain>(meshes_.subdomains[s]);
    const SubdomainMesh& mesh = *sub->mesh;
    sub->raw = assemble_subdomain_matrix(mesh, sub->layout, material_.cells[s], material_.c0, material_.alpha,
                                         options_.dt);
    sub->history = assemble_history_matrix(sub->raw, sub->layout);
    const EssentialConditions ess = essential_conditions(mesh, sub->layout, problem_, 0.0, true, false);
    sub->matrix = sub->raw.with_identity_rows(ess.dofs);
    sub->lu = std::make_unique<Factorization>(sub->matrix);
    int local = 0;
    for (int f : meshes_.interfaces_of(s)) {
      sub->links.emplace_back(meshes_.interfaces[f], mesh, mortar_.degree());
      sub->link_offsets.push_back(local);
      local += mortar_.interface_size(f);
    }
    sub->basis = mortar_.subdomain_basis(meshes_, s);
    subs_[s] = std::move(sub);
  });
  state_.subdomains.resize(n);
  for (int s = 0; s < n; ++s) {
    state_.subdomains[s].x = Vector::Zero(subs_[s]->layout.size());
    state_.subdomains[s].u = Vector::Zero(2 * subs_[s]->layout.n_cells);
    state_.subdomains[s].rotation = Vector::Zero(subs_[s]->layout.n_cells);
  }
  state_.lambda = Vector::Zero(mortar_.size());
  state_.lambda_rate = Vector::Zero(mortar_.size());
}

DDSolver::~DDSolver() = default;

const SubdomainDofLayout& DDSolver::layout(int s) const { return subs_.at(s)->layout; }
const std::vector<TraceProjection>& DDSolver::projections(int s) const { return subs_.at(s)->links; }
const SparseMatrix& DDSolver::step_matrix(int s) const { return subs_.at(s)->matrix; }

const MultiscaleBasis& DDSolver::msb() const {
  if (!msb_) throw std::logic_error("multiscale basis has not been built");
  return *msb_;
}

Vector DDSolver::star_solve_impl(int s, const Vector& lambda, bool elasticity) {
  const Subdomain& sub = *subs_[s];
  const int n = elasticity ? sub.layout.elasticity_size() : sub.layout.size();
  Vector rhs = Vector::Zero(n);
  for (const TraceProjection& link : sub.links) {
    const int f = link.interface_id();
    const int cs = mortar_.component_size(f);
    SideTrace data(link.n_edges());
    for (int c = 0; c < MortarSpace::n_components; ++c) {
      if (elasticity && c == 2) continue;
      const Vector t = link.to_trace(lambda.segment(mortar_.offset(f) + c * cs, cs));
      for (int e = 0; e < link.n_edges(); ++e)
        for (int k = 0; k < 2; ++k) data[e][c][k] = t[2 * e + k];
    }
    add_interface_rhs(*sub.mesh, sub.layout, link.side(), data, elasticity ? 1.0 : options_.dt, !elasticity, rhs);
  }
  return elasticity ? sub.elasticity_lu->solve(rhs) : sub.lu->solve(rhs);
}

Vector DDSolver::subdomain_response(int s, const Vector& x, bool include_flow) const {
  const Subdomain& sub = *subs_[s];
  Vector local = Vector::Zero(sub.basis.size());
  for (std::size_t l = 0; l < sub.links.size(); ++l) {
    const TraceProjection& link = sub.links[l];
    const int cs = mortar_.component_size(link.interface_id());
    const SideTrace trace = extract_side_trace(*sub.mesh, sub.layout, link.side(), x, include_flow);
    for (int c = 0; c < MortarSpace::n_components; ++c) {
      if (!include_flow && c == 2) continue;
      Vector t(link.trace_size());
      for (int e = 0; e < link.n_edges(); ++e)
        for (int k = 0; k < 2; ++k) t[2 * e + k] = trace[e][c][k];
      const double sign = c == 2 ? -1.0 : 1.0;
      local.segment(sub.link_offsets[l] + c * cs, cs) = sign * link.to_mortar(t);
    }
  }
  return local;
}

Vector DDSolver::response(int s, const Vector& x) const {
  Vector out = Vector::Zero(mortar_.size());
  const Vector local = subdomain_response(s, x, true);
  const auto& basis = subs_[s]->basis;
  for (std::size_t k = 0; k < basis.size(); ++k) out[basis[k]] = local[k];
  return out;
}

Vector DDSolver::solve_star(int s, const Vector& lambda) {
  Vector x = star_solve_impl(s, lambda, false);
  count(s);
  return x;
}

Vector DDSolver::bar_rhs(int s) const {
  const Subdomain& sub = *subs_[s];
  const double t = state_.time + options_.dt;
  Vector rhs = sub.history * state_.subdomains[s].x;
  rhs += assemble_source_rhs(*sub.mesh, sub.layout, problem_, t, options_.dt);
  rhs += assemble_boundary_rhs(*sub.mesh, sub.layout, problem_, t, options_.dt);
  apply_essential(essential_conditions(*sub.mesh, sub.layout, problem_, t, true, true), rhs);
  return rhs;
}

Vector DDSolver::solve_bar(int s) {
  Vector x = subs_[s]->lu->solve(bar_rhs(s));
  count(s);
  return x;
}

Vector DDSolver::interface_apply(const Vector& lambda) {
  const int n = n_subdomains();
  std::vector<Vector> local(n);
  parallel_for(n, [&](int s) { local[s] = subdomain_response(s, star_solve_impl(s, lambda, false), true); });
  Vector out = Vector::Zero(mortar_.size());
  for (int s = 0; s < n; ++s) {
    count(s);
    const auto& basis = subs_[s]->basis;
    for (std::size_t k = 0; k < basis.size(); ++k) out[basis[k]] += local[s][k];
  }
  return out;
}

Vector DDSolver::interface_rhs() {
  const int n = n_subdomains();
  std::vector<Vector> local(n);
  parallel_for(n, [&](int s) { local[s] = subdomain_response(s, subs_[s]->lu->solve(bar_rhs(s)), true); });
  Vector out = Vector::Zero(mortar_.size());
  for (int s = 0; s < n; ++s) {
    count(s);
    const auto& basis = subs_[s]->basis;
    for (std::size_t k = 0; k < basis.size(); ++k) out[basis[k]] -= local[s][k];
  }
  return out;
}

void DDSolver::build_msb() {
  auto basis = std::make_unique<MultiscaleBasis>();
  basis->dt = options_.dt;
  const int n = n_subdomains();
  std::vector<std::pair<int, int>> jobs;
  for (int s = 0; s < n; ++s) {
    basis->indices.push_back(subs_[s]->basis);
    basis->responses.emplace_back(subs_[s]->basis.size(), subs_[s]->basis.size());
    for (std::size_t k = 0; k < subs_[s]->basis.size(); ++k) jobs.emplace_back(s, static_cast<int>(k));
  }
  parallel_for(static_cast<int>(jobs.size()), [&](int j) {
    const auto [s, k] = jobs[j];
    Vector unit = Vector::Zero(mortar_.size());
    unit[subs_[s]->basis[k]] = 1.0;
    basis->responses[s].col(k) = subdomain_response(s, star_solve_impl(s, unit, false), true);
  });
  long most = 0;
  for (int s = 0; s < n; ++s) {
    const long nb = static_cast<long>(subs_[s]->basis.size());
    count(s, nb);
    most = std::max(most, nb);
  }
  counts_.msb_build += most;
  msb_ = std::move(basis);
}

Vector DDSolver::msb_apply(const MultiscaleBasis& basis, const Vector& lambda) const {
  if (basis.dt != options_.dt) {
    std::ostringstream msg;
    msg << "multiscale basis was built for dt=" << basis.dt << " but the solver uses dt=" << options_.dt;
    throw InputError(msg.str());
  }
  if (basis.indices.size() != subs_.size() || lambda.size() != mortar_.size())
    throw InputError("multiscale basis does not match this decomposition");
  Vector out = Vector::Zero(mortar_.size());
  for (std::size_t s = 0; s < basis.indices.size(); ++s) {
    const auto& idx = basis.indices[s];
    Vector local(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) local[k] = lambda[idx[k]];
    const Vector r = basis.responses[s] * local;
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] += r[k];
  }
  return out;
}

void DDSolver::initialize() {
  const int n = n_subdomains();
  std::vector<long> init_solves(n, 0);
  state_.step = 0;
  state_.time = 0.0;

  // Initial pressure: exact cell averages.
  const SquareRule rule = quadrature_volume(4);
  std::vector<Vector> p0(n);
  for (int s = 0; s < n; ++s) {
    const SubdomainMesh& mesh = meshes_.subdomains[s];
    p0[s] = Vector::Zero(mesh.n_cells());
    if (!problem_.initial_pressure) continue;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Vec2 o = mesh.cell_origin(c);
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        acc += rule.weights[q] *
               problem_.initial_pressure(o.x + rule.points[q][0] * mesh.hx(), o.y + rule.points[q][1] * mesh.hy());
      p0[s][c] = acc;
    }
  }

  // Elasticity with the initial pressure as data.
  std::vector<Vector> bar(n);
  std::vector<EssentialConditions> ess(n);
  parallel_for(n, [&](int s) {
    Subdomain& sub = *subs_[s];
    const SubdomainMesh& mesh = *sub.mesh;
    const SubdomainDofLayout& lay = sub.layout;
    const int ne = lay.elasticity_size();
    const SparseMatrix unit = assemble_subdomain_matrix(mesh, lay, material_.cells[s], material_.c0, material_.alpha, 1.0);
    ess[s] = essential_conditions(mesh, lay, problem_, 0.0, false, true);
    sub.elasticity_lu = std::make_unique<Factorization>(unit.block(0, 0, ne, ne).with_identity_rows(ess[s].dofs));
    Vector rhs = assemble_boundary_rhs(mesh, lay, problem_, 0.0, 1.0, true);
    rhs += assemble_source_rhs(mesh, lay, problem_, 0.0, 1.0).head(ne);
    rhs.head(2 * lay.n_bdm) -= sub.raw.block(0, lay.p(0), 2 * lay.n_bdm, lay.n_cells) * p0[s];
    apply_essential(ess[s], rhs);
    bar[s] = sub.elasticity_lu->solve(rhs);
  });
  const std::vector<int> uidx = mortar_.component_indices(true);
  auto scatter_u = [&](const Vector& compact) {
    Vector full = Vector::Zero(mortar_.size());
    for (std::size_t k = 0; k < uidx.size(); ++k) full[uidx[k]] = compact[k];
    return full;
  };
  auto gather_responses = [&](const std::vector<Vector>& xs) {
    Vector full = Vector::Zero(mortar_.size());
    for (int s = 0; s < n; ++s) {
      const Vector local = subdomain_response(s, xs[s], false);
      const auto& basis = subs_[s]->basis;
      for (std::size_t k = 0; k < basis.size(); ++k) full[basis[k]] += local[k];
    }
    Vector compact(uidx.size());
    for (std::size_t k = 0; k < uidx.size(); ++k) compact[k] = full[uidx[k]];
    return compact;
  };
  for (int s = 0; s < n; ++s) ++init_solves[s];
  Vector lambda_u = Vector::Zero(mortar_.size());
  if (!uidx.empty()) {
    const Vector g = -gather_responses(bar);
    auto apply = [&](const Vector& v) {
      const Vector full = scatter_u(v);
      std::vector<Vector> xs(n);
      parallel_for(n, [&](int s) { xs[s] = star_solve_impl(s, full, true); });
      for (int s = 0; s < n; ++s) ++init_solves[s];
      return gather_responses(xs);
    };
    const GmresResult res = gmres(apply, g, options_.gmres_tol, options_.gmres_max_it);
    if (!res.converged)
      throw NumericalError("initial elasticity interface problem did not converge in " +
                           std::to_string(res.iterations) + " iterations");
    lambda_u = scatter_u(res.solution);
  }

  // Pressure mortar from the initial pressure.
  Vector lambda = lambda_u;
  if (problem_.initial_pressure)
    for (const Interface& f : meshes_.interfaces) mortar_.project_function(f, 2, problem_.initial_pressure, lambda);

  parallel_for(n, [&](int s) {
    Subdomain& sub = *subs_[s];
    const SubdomainMesh& mesh = *sub.mesh;
    const SubdomainDofLayout& lay = sub.layout;
    const Vector xe = bar[s] + star_solve_impl(s, lambda_u, true);
    sub.elasticity_lu.reset();

    // Darcy velocity from (K^-1 z, zeta) = (p0, div zeta) - <p, zeta.n>.
    const SparseMatrix mz = sub.raw.block(lay.z(0), lay.z(0), lay.n_bdm, lay.n_bdm);
    Vector full = assemble_boundary_rhs(mesh, lay, problem_, 0.0, 1.0, false);
    full.segment(lay.z(0), lay.n_bdm) -= sub.raw.block(lay.z(0), lay.p(0), lay.n_bdm, lay.n_cells) * p0[s];
    for (const TraceProjection& link : sub.links) {
      const int f = link.interface_id();
      const int cs = mortar_.component_size(f);
      const Vector t = link.to_trace(lambda.segment(mortar_.offset(f) + 2 * cs, cs));
      SideTrace data(link.n_edges());
      for (int e = 0; e < link.n_edges(); ++e)
        for (int k = 0; k < 2; ++k) data[e][2][k] = t[2 * e + k];
      add_interface_rhs(mesh, lay, link.side(), data, 0.0, true, full);
    }
    const EssentialConditions flux = essential_conditions(mesh, lay, problem_, 0.0, true, true);
    std::vector<int> zdofs;
    Vector zrhs = full.segment(lay.z(0), lay.n_bdm);
    for (std::size_t i = 0; i < flux.dofs.size(); ++i) {
      const int d = flux.dofs[i];
      if (d < lay.z(0) || d >= lay.z(0) + lay.n_bdm) continue;
      zdofs.push_back(d - lay.z(0));
      zrhs[d - lay.z(0)] = flux.values[i];
    }
    const Factorization darcy(mz.with_identity_rows(zdofs));
    const Vector z = darcy.solve(zrhs);

    SubdomainState& st = state_.subdomains[s];
    st.x = Vector::Zero(lay.size());
    st.x.head(2 * lay.n_bdm) = xe.head(2 * lay.n_bdm);
    st.x.segment(lay.z(0), lay.n_bdm) = z;
    st.x.segment(lay.p(0), lay.n_cells) = p0[s];
    st.u = xe.segment(lay.udot(0, 0), 2 * lay.n_cells);
    st.rotation = xe.segment(lay.rotation(0), lay.n_cells);
  });
  for (int s = 0; s < n; ++s) init_solves[s] += 2;
  counts_.initialization += *std::max_element(init_solves.begin(), init_solves.end());
  state_.lambda = lambda;
  state_.lambda_rate = Vector::Zero(mortar_.size());
}

StepReport DDSolver::advance_step() {
  if (options_.use_msb && !msb_) build_msb();
  const int n = n_subdomains();
  const double dt = options_.dt;

  std::vector<Vector> bar(n);
  parallel_for(n, [&](int s) { bar[s] = subs_[s]->lu->solve(bar_rhs(s)); });
  Vector g = Vector::Zero(mortar_.size());
  for (int s = 0; s < n; ++s) {
    count(s);
    const Vector local = subdomain_response(s, bar[s], true);
    const auto& basis = subs_[s]->basis;
    for (std::size_t k = 0; k < basis.size(); ++k) g[basis[k]] -= local[k];
  }

  Vector lambda = Vector::Zero(mortar_.size());
  StepReport report;
  if (mortar_.size() > 0) {
    LinearOperator apply;
    if (options_.use_msb)
      apply = [&](const Vector& v) { return msb_apply(*msb_, v); };
    else
      apply = [&](const Vector& v) { return interface_apply(v); };
    GmresResult res = gmres(apply, g, options_.gmres_tol, options_.gmres_max_it);
    report.gmres_iterations = res.iterations;
    report.residuals = res.residuals;
    if (!res.converged) {
      std::ostringstream msg;
      msg << "interface GMRES did not converge at step " << state_.step + 1 << " after " << res.iterations
          << " iterations; residual history:";
      for (double r : res.residuals) msg << ' ' << r;
      throw NumericalError(msg.str());
    }
    lambda = res.solution;
  }

  parallel_for(n, [&](int s) {
    const SubdomainDofLayout& lay = subs_[s]->layout;
    SubdomainState& st = state_.subdomains[s];
    st.x = bar[s] + star_solve_impl(s, lambda, false);
    st.u += dt * st.x.segment(lay.udot(0, 0), 2 * lay.n_cells);
    st.rotation += dt * st.x.segment(lay.rotation(0), lay.n_cells);
  });
  for (int s = 0; s < n; ++s) count(s);

  for (int i = 0; i < mortar_.n_interfaces(); ++i) {
    const int cs = mortar_.component_size(i);
    const int o = mortar_.offset(i);
    state_.lambda.segment(o, 2 * cs) += dt * lambda.segment(o, 2 * cs);
    state_.lambda.segment(o + 2 * cs, cs) = lambda.segment(o + 2 * cs, cs);
  }
  state_.lambda_rate = lambda;
  state_.step += 1;
  state_.time = state_.step * dt;
  reports_.push_back(report);
  return report;
}

Vector DDSolver::continuity_residual() const {
  Vector out = Vector::Zero(mortar_.size());
  for (int s = 0; s < n_subdomains(); ++s) {
    const Subdomain& sub = *subs_[s];
    for (const TraceProjection& link : sub.links) {
      const int f = link.interface_id();
      const int cs = mortar_.component_size(f);
      const SideTrace trace = extract_side_trace(*sub.mesh, sub.layout, link.side(), state_.subdomains[s].x, true);
      for (int c = 0; c < MortarSpace::n_components; ++c) {
        Vector t(link.trace_size());
        for (int e = 0; e < link.n_edges(); ++e)
          for (int k = 0; k < 2; ++k) t[2 * e + k] = trace[e][c][k];
        out.segment(mortar_.offset(f) + c * cs, cs) += link.cross().transpose() * t;
      }
    }
  }
  return out;
}

}  // namespace biot_mortar
