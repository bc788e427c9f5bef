#include "biot_mortar/assembly.hpp"

#include "biot_mortar/quadrature.hpp"

#include <algorithm>
#include <numeric>

namespace biot_mortar {

SparseMatrix assemble_subdomain_matrix(const SubdomainMesh& mesh, const SubdomainDofLayout& layout,
                                       const std::vector<CellMaterial>& cells, double c0, double alpha, double dt) {
  if (!(dt > 0.0)) throw InputError("time step must be positive");
  if (static_cast<int>(cells.size()) != mesh.n_cells()) throw InputError("material count does not match the mesh");
  const ElementMatrices em = element_matrices(mesh.hx(), mesh.hy());
  const double area = em.area;
  SparseMatrix a(layout.size(), layout.size());

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellMaterial& m = cells[c];
    if (!(m.mu > 0.0)) throw InputError("shear modulus must be positive (cell " + std::to_string(c) + ")");
    const double det = m.k_xx * m.k_yy - m.k_xy * m.k_xy;
    const double kinv_xx = m.k_yy / det, kinv_xy = -m.k_xy / det, kinv_yy = m.k_xx / det;
    const double s = 1.0 / (2.0 * m.mu);
    const double shift = m.lambda / (2.0 * m.mu + 2.0 * m.lambda);
    const double beta = 1.0 / (2.0 * (m.mu + m.lambda));
    const auto dofs = layout.cell_bdm_dofs(mesh, c);

    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        a.add(layout.sigma(0, dofs[i]), layout.sigma(0, dofs[j]), s * (em.mass(i, j) - shift * em.mass_xx(i, j)));
        a.add(layout.sigma(0, dofs[i]), layout.sigma(1, dofs[j]), -s * shift * em.mass_xy(i, j));
        a.add(layout.sigma(1, dofs[i]), layout.sigma(0, dofs[j]), -s * shift * em.mass_xy(j, i));
        a.add(layout.sigma(1, dofs[i]), layout.sigma(1, dofs[j]), s * (em.mass(i, j) - shift * em.mass_yy(i, j)));
        a.add(layout.z(dofs[i]), layout.z(dofs[j]),
              kinv_xx * em.mass_xx(i, j) + kinv_xy * (em.mass_xy(i, j) + em.mass_xy(j, i)) +
                  kinv_yy * em.mass_yy(i, j));
      }
      const double div = em.divergence[i] * area;
      const double ix = em.integral_x[i], iy = em.integral_y[i];
      for (int r = 0; r < 2; ++r) {
        a.add(layout.sigma(r, dofs[i]), layout.udot(r, c), dt * div);
        a.add(layout.udot(r, c), layout.sigma(r, dofs[i]), div);
      }
      a.add(layout.sigma(0, dofs[i]), layout.rotation(c), dt * iy);
      a.add(layout.sigma(1, dofs[i]), layout.rotation(c), -dt * ix);
      a.add(layout.rotation(c), layout.sigma(0, dofs[i]), iy);
      a.add(layout.rotation(c), layout.sigma(1, dofs[i]), -ix);
      a.add(layout.sigma(0, dofs[i]), layout.p(c), alpha * beta * ix);
      a.add(layout.sigma(1, dofs[i]), layout.p(c), alpha * beta * iy);
      a.add(layout.p(c), layout.sigma(0, dofs[i]), alpha * beta * ix);
      a.add(layout.p(c), layout.sigma(1, dofs[i]), alpha * beta * iy);
      a.add(layout.z(dofs[i]), layout.p(c), -div);
      a.add(layout.p(c), layout.z(dofs[i]), dt * div);
    }
    a.add(layout.p(c), layout.p(c), (c0 + alpha * alpha / (m.mu + m.lambda)) * area);
  }
  a.finalize();
  return a;
}

SparseMatrix assemble_history_matrix(const SparseMatrix& step_matrix, const SubdomainDofLayout& layout) {
  auto keep = [&](int k) { return k < 2 * layout.n_bdm || k >= layout.p(0); };
  SparseMatrix h(layout.size(), layout.size());
  const auto& s = step_matrix.storage();
  for (int c = 0; c < s.outerSize(); ++c) {
    if (!keep(c)) continue;
    for (SparseMatrix::Storage::InnerIterator it(s, c); it; ++it)
      if (keep(it.row())) h.add(it.row(), c, it.value());
  }
  h.finalize();
  return h;
}

namespace {

Vec2 edge_point(const EdgeGeometry& g, double t) {
  return g.vertical ? Vec2{g.start.x, g.start.y + t * g.length} : Vec2{g.start.x + t * g.length, g.start.y};
}

[[noreturn]] void missing(const char* what, Side s) {
  throw InputError(std::string("missing ") + what + " data on the " + side_name(s) + " boundary");
}

}  // namespace

EssentialConditions essential_conditions(const SubdomainMesh& mesh, const SubdomainDofLayout& layout,
                                         const ProblemData& problem, double t, bool include_flow, bool values) {
  EssentialConditions ess;
  const SegmentRule rule = quadrature_segment(4);
  for (Side s : all_sides) {
    if (!mesh.on_exterior(s)) continue;
    const SideBc& bc = problem.side(s);
    const bool traction = bc.mechanics == MechanicsBc::traction;
    const bool flux = include_flow && bc.flow == FlowBc::flux;
    if (!traction && !flux) continue;
    if (values && traction && !problem.traction) missing("traction", s);
    if (values && flux && !problem.normal_flux) missing("normal flux", s);
    const Vec2 n = outward_normal(s);
    const double so = outward_sign(s);
    for (int e : mesh.side_edges(s)) {
      const EdgeGeometry g = mesh.edge(e);
      std::array<std::array<double, 2>, 3> d{};
      if (values) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const Vec2 x = edge_point(g, rule.points[q]);
          for (int k = 0; k < 2; ++k) {
            const double w = rule.weights[q] * (2 * k + 1) * legendre(k, rule.points[q]) * so;
            if (traction) {
              const Vec2 tr = problem.traction(x.x, x.y, t, n);
              d[0][k] += w * tr.x;
              d[1][k] += w * tr.y;
            }
            if (flux) d[2][k] += w * problem.normal_flux(x.x, x.y, t, n);
          }
        }
      }
      for (int k = 0; k < 2; ++k) {
        const int b = SubdomainDofLayout::bdm(e, k);
        if (traction) {
          for (int r = 0; r < 2; ++r) {
            ess.dofs.push_back(layout.sigma(r, b));
            ess.values.push_back(d[r][k]);
          }
        }
        if (flux) {
          ess.dofs.push_back(layout.z(b));
          ess.values.push_back(d[2][k]);
        }
      }
    }
  }
  std::vector<std::size_t> order(ess.dofs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ess.dofs[a] < ess.dofs[b]; });
  EssentialConditions sorted;
  for (std::size_t i : order) {
    sorted.dofs.push_back(ess.dofs[i]);
    sorted.values.push_back(ess.values[i]);
  }
  return sorted;
}

void apply_essential(const EssentialConditions& ess, Vector& rhs) {
  for (std::size_t i = 0; i < ess.dofs.size(); ++i) rhs[ess.dofs[i]] = ess.values[i];
}

Vector assemble_source_rhs(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, const ProblemData& problem,
                           double t, double dt) {
  Vector rhs = Vector::Zero(layout.size());
  if (!problem.body_force && !problem.fluid_source) return rhs;
  const SquareRule rule = quadrature_volume(4);
  const double area = mesh.cell_area();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 o = mesh.cell_origin(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double x = o.x + rule.points[q][0] * mesh.hx();
      const double y = o.y + rule.points[q][1] * mesh.hy();
      const double jxw = rule.weights[q] * area;
      if (problem.body_force) {
        const Vec2 f = problem.body_force(x, y, t);
        rhs[layout.udot(0, c)] -= jxw * f.x;
        rhs[layout.udot(1, c)] -= jxw * f.y;
      }
      if (problem.fluid_source) rhs[layout.p(c)] += dt * jxw * problem.fluid_source(x, y, t);
    }
  }
  return rhs;
}

Vector assemble_boundary_rhs(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, const ProblemData& problem,
                             double t, double dt, bool static_elasticity) {
  Vector rhs = Vector::Zero(static_elasticity ? layout.elasticity_size() : layout.size());
  const SegmentRule rule = quadrature_segment(4);
  const VectorField& gu = static_elasticity ? problem.displacement : problem.displacement_rate;
  const double weight = static_elasticity ? 1.0 : dt;
  for (Side s : all_sides) {
    if (!mesh.on_exterior(s)) continue;
    const SideBc& bc = problem.side(s);
    const bool disp = bc.mechanics == MechanicsBc::displacement;
    const bool pres = !static_elasticity && bc.flow == FlowBc::pressure;
    if (disp && !gu) missing(static_elasticity ? "displacement" : "displacement rate", s);
    if (pres && !problem.pressure) missing("pressure", s);
    const double so = outward_sign(s);
    for (int e : mesh.side_edges(s)) {
      const EdgeGeometry g = mesh.edge(e);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 x = edge_point(g, rule.points[q]);
        const Vec2 u = disp ? gu(x.x, x.y, t) : Vec2{};
        const double p = pres ? problem.pressure(x.x, x.y, t) : 0.0;
        for (int k = 0; k < 2; ++k) {
          const double w = rule.weights[q] * g.length * legendre(k, rule.points[q]) * so;
          const int b = SubdomainDofLayout::bdm(e, k);
          if (disp) {
            rhs[layout.sigma(0, b)] += weight * w * u.x;
            rhs[layout.sigma(1, b)] += weight * w * u.y;
          }
          if (pres) rhs[layout.z(b)] -= w * p;
        }
      }
    }
  }
  return rhs;
}

void add_interface_rhs(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, Side side, const SideTrace& data,
                       double dt, bool include_flow, Vector& rhs) {
  const std::vector<int> edges = mesh.side_edges(side);
  const double so = outward_sign(side);
  const double len = is_vertical(side) ? mesh.hy() : mesh.hx();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      const int b = SubdomainDofLayout::bdm(edges[i], k);
      const double w = so * len / (2 * k + 1);
      rhs[layout.sigma(0, b)] += dt * w * data[i][0][k];
      rhs[layout.sigma(1, b)] += dt * w * data[i][1][k];
      if (include_flow) rhs[layout.z(b)] -= w * data[i][2][k];
    }
  }
}

SideTrace extract_side_trace(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, Side side, const Vector& x,
                             bool include_flow) {
  const std::vector<int> edges = mesh.side_edges(side);
  const double so = outward_sign(side);
  SideTrace out(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      const int b = SubdomainDofLayout::bdm(edges[i], k);
      out[i][0][k] = so * x[layout.sigma(0, b)];
      out[i][1][k] = so * x[layout.sigma(1, b)];
      out[i][2][k] = include_flow ? so * x[layout.z(b)] : 0.0;
    }
  }
  return out;
}

}  // namespace biot_mortar
