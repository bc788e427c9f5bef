#pragma once

#include "biot_mortar/fem.hpp"
#include "biot_mortar/linalg.hpp"
#include "biot_mortar/mesh.hpp"
#include "biot_mortar/problem.hpp"

#include <array>
#include <vector>

namespace biot_mortar {

/// Left-hand side of one backward Euler step on a subdomain, before boundary conditions.
///
/// Rows follow the unknown ordering of SubdomainDofLayout and hold, in order: the
/// time-differentiated constitutive equation (tested with tau), momentum balance (v),
/// weak symmetry (xi), Darcy's law (zeta) and mass balance (w). Only the
/// (udot, div tau), (rotation rate, tau) and (div z, w) blocks carry dt.
SparseMatrix assemble_subdomain_matrix(const SubdomainMesh& mesh, const SubdomainDofLayout& layout,
                                       const std::vector<CellMaterial>& cells, double c0, double alpha, double dt);

/// Operator that maps the previous state to its right-hand-side contribution:
/// (A(sigma^n + alpha p^n I), tau) and c0 (p^n, w) + alpha (A(sigma^n + alpha p^n I), w I).
SparseMatrix assemble_history_matrix(const SparseMatrix& step_matrix, const SubdomainDofLayout& layout);

/// Prescribed DOF values: traction sides fix both stress rows, flux sides fix z.
struct EssentialConditions {
  std::vector<int> dofs;
  std::vector<double> values;
};

/// Essential conditions on exterior sides at time t. With values=false the values are zero
/// and the data functions are not evaluated.
EssentialConditions essential_conditions(const SubdomainMesh& mesh, const SubdomainDofLayout& layout,
                                         const ProblemData& problem, double t, bool include_flow, bool values);

void apply_essential(const EssentialConditions& ess, Vector& rhs);

/// -(f, v) in the momentum rows and dt (g, w) in the mass rows, both at time t.
Vector assemble_source_rhs(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, const ProblemData& problem,
                           double t, double dt);

/// Natural boundary terms on exterior sides: dt <d/dt g_u, tau n> on displacement sides and
/// -<g_p, zeta.n> on pressure sides. With static_elasticity, g_u itself enters with unit
/// weight and the flow rows are left alone.
Vector assemble_boundary_rhs(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, const ProblemData& problem,
                             double t, double dt, bool static_elasticity = false);

/// Piecewise linear data on the edges of one subdomain side, one entry per edge in
/// SubdomainMesh::side_edges order: [component][mode] with components (u_x, u_y, p) and the
/// edge-local Legendre modes (1, 2t-1).
using SideTrace = std::vector<std::array<std::array<double, 2>, 3>>;

/// Adds dt <lambda_u, tau n> to the stress rows and -<lambda_p, zeta.n> to the Darcy rows.
void add_interface_rhs(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, Side side, const SideTrace& data,
                       double dt, bool include_flow, Vector& rhs);

/// Outward normal traces (sigma_1 n, sigma_2 n, z.n) of a solution on one side, same layout as SideTrace.
SideTrace extract_side_trace(const SubdomainMesh& mesh, const SubdomainDofLayout& layout, Side side, const Vector& x,
                             bool include_flow);

}  // namespace biot_mortar
