#pragma once

#include "biot_mortar/common.hpp"
#include "biot_mortar/mesh.hpp"

#include <functional>
#include <vector>

namespace biot_mortar {

/// Discontinuous piecewise polynomial mortars of degree m on every interface grid.
///
/// Three components per interface: displacement x, displacement y, pressure. On each mortar
/// element the basis is the Legendre family P_j(2t-1), j = 0..m, so the mass matrix is
/// diagonal with entries H/(2j+1). Global order: interface, component, element, mode.
class MortarSpace {
 public:
  static constexpr int n_components = 3;

  explicit MortarSpace(const DomainMeshes& meshes);

  int degree() const { return degree_; }
  int modes() const { return degree_ + 1; }
  int size() const { return size_; }
  int n_interfaces() const { return static_cast<int>(offsets_.size()); }
  int elements(int iface) const { return elements_[iface]; }
  int offset(int iface) const { return offsets_[iface]; }
  /// Coefficients of one component on one interface.
  int component_size(int iface) const { return elements_[iface] * modes(); }
  int interface_size(int iface) const { return n_components * component_size(iface); }
  int index(int iface, int comp, int elem, int mode) const {
    return offsets_[iface] + comp * component_size(iface) + elem * modes() + mode;
  }
  /// Diagonal of the mortar mass matrix.
  const Vector& mass() const { return mass_; }
  double inner(const Vector& a, const Vector& b) const { return a.dot(mass_.cwiseProduct(b)); }

  /// Global indices of the unit basis functions that live on the interfaces of one subdomain,
  /// in global order.
  std::vector<int> subdomain_basis(const DomainMeshes& meshes, int subdomain) const;
  /// Indices of all displacement (comp 0, 1) or all pressure (comp 2) coefficients.
  std::vector<int> component_indices(bool displacement) const;

  /// Value of component `comp` of a mortar vector at arc length s on an interface. At element
  /// breakpoints the element to the right is used.
  double evaluate(const Interface& iface, const Vector& lambda, int comp, double s) const;
  /// Mortar L2 projection of a scalar function of position into one component.
  void project_function(const Interface& iface, int comp, const std::function<double(double, double)>& f,
                        Vector& lambda) const;

 private:
  int degree_ = 1;
  int size_ = 0;
  std::vector<int> offsets_;
  std::vector<int> elements_;
  std::vector<std::vector<double>> nodes_;
  Vector mass_;
};

/// Physical point of an interface at arc length s.
Vec2 interface_point(const Interface& iface, double s);

/// L2 projections between one component of the mortar space on an interface and the normal
/// trace space (piecewise linear per edge, Legendre basis) of one adjacent subdomain.
class TraceProjection {
 public:
  TraceProjection(const Interface& iface, const SubdomainMesh& mesh, int degree);

  int interface_id() const { return interface_id_; }
  int subdomain() const { return subdomain_; }
  Side side() const { return side_; }
  int n_edges() const { return static_cast<int>(edge_length_.size()); }
  int trace_size() const { return 2 * n_edges(); }
  int mortar_size() const { return static_cast<int>(mortar_mass_.size()); }

  /// C(e*2+k, E*(m+1)+j) = integral of P_k on edge e times P_j on mortar element E.
  const DenseMatrix& cross() const { return cross_; }
  const Vector& trace_mass() const { return trace_mass_; }
  const Vector& mortar_mass() const { return mortar_mass_; }

  /// Q mu: trace coefficients with <mu - Q mu, t> = 0 for every trace function t.
  Vector to_trace(const Vector& mu) const;
  /// Q^T t: mortar coefficients with <Q^T t, mu> = <t, Q mu> for every mortar function mu.
  Vector to_mortar(const Vector& t) const;

 private:
  int interface_id_;
  int subdomain_;
  Side side_;
  std::vector<double> edge_length_;
  DenseMatrix cross_;
  Vector trace_mass_;
  Vector mortar_mass_;
};

/// Smallest singular value of mu -> (Q_lower mu, Q_upper mu) measured in L2 norms. A value
/// bounded away from zero indicates the mortar grid is coarse enough for the trace grids.
double coarseness_diagnostic(const TraceProjection& lower, const TraceProjection& upper);

}  // namespace biot_mortar
