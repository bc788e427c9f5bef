#include "biot_mortar/mortar.hpp"

#include "biot_mortar/quadrature.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace biot_mortar {

MortarSpace::MortarSpace(const DomainMeshes& meshes) : degree_(meshes.spec.mortar_degree) {
  if (degree_ < 1 || degree_ > 2) throw InputError("mortar degree must be 1 or 2");
  for (const Interface& f : meshes.interfaces) {
    offsets_.push_back(size_);
    elements_.push_back(f.mortar_elements());
    nodes_.push_back(f.mortar_nodes);
    size_ += n_components * f.mortar_elements() * modes();
  }
  mass_.resize(size_);
  for (int i = 0; i < n_interfaces(); ++i)
    for (int c = 0; c < n_components; ++c)
      for (int e = 0; e < elements_[i]; ++e)
        for (int j = 0; j < modes(); ++j)
          mass_[index(i, c, e, j)] = (nodes_[i][e + 1] - nodes_[i][e]) / (2 * j + 1);
}

std::vector<int> MortarSpace::subdomain_basis(const DomainMeshes& meshes, int subdomain) const {
  std::vector<int> out;
  for (int f : meshes.interfaces_of(subdomain))
    for (int k = 0; k < interface_size(f); ++k) out.push_back(offsets_[f] + k);
  return out;
}

std::vector<int> MortarSpace::component_indices(bool displacement) const {
  std::vector<int> out;
  for (int i = 0; i < n_interfaces(); ++i)
    for (int c = 0; c < n_components; ++c) {
      if ((c < 2) != displacement) continue;
      for (int k = 0; k < component_size(i); ++k) out.push_back(offsets_[i] + c * component_size(i) + k);
    }
  return out;
}

double MortarSpace::evaluate(const Interface& iface, const Vector& lambda, int comp, double s) const {
  const std::vector<double>& nodes = nodes_[iface.id];
  auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
  int e = static_cast<int>(it - nodes.begin()) - 1;
  e = std::clamp(e, 0, elements_[iface.id] - 1);
  const double t = (s - nodes[e]) / (nodes[e + 1] - nodes[e]);
  double v = 0.0;
  for (int j = 0; j < modes(); ++j) v += lambda[index(iface.id, comp, e, j)] * legendre(j, t);
  return v;
}

void MortarSpace::project_function(const Interface& iface, int comp, const std::function<double(double, double)>& f,
                                   Vector& lambda) const {
  const SegmentRule rule = quadrature_segment(5);
  const std::vector<double>& nodes = nodes_[iface.id];
  for (int e = 0; e < elements_[iface.id]; ++e) {
    for (int j = 0; j < modes(); ++j) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Vec2 x = interface_point(iface, nodes[e] + rule.points[q] * (nodes[e + 1] - nodes[e]));
        acc += rule.weights[q] * f(x.x, x.y) * legendre(j, rule.points[q]);
      }
      lambda[index(iface.id, comp, e, j)] = (2 * j + 1) * acc;
    }
  }
}

Vec2 interface_point(const Interface& iface, double s) {
  return iface.vertical ? Vec2{iface.position, iface.start + s} : Vec2{iface.start + s, iface.position};
}

TraceProjection::TraceProjection(const Interface& iface, const SubdomainMesh& mesh, int degree)
    : interface_id_(iface.id), subdomain_(mesh.id()), side_(iface.side_of(mesh.id())) {
  const bool lower = mesh.id() == iface.lower;
  const auto edges = interface_arclength_map(mesh, iface);
  const int modes = degree + 1;
  const int n_mort = iface.mortar_elements();
  for (const auto& e : edges) edge_length_.push_back(e[1] - e[0]);
  trace_mass_.resize(2 * n_edges());
  for (int e = 0; e < n_edges(); ++e)
    for (int k = 0; k < 2; ++k) trace_mass_[2 * e + k] = edge_length_[e] / (2 * k + 1);
  mortar_mass_.resize(n_mort * modes);
  for (int m = 0; m < n_mort; ++m)
    for (int j = 0; j < modes; ++j)
      mortar_mass_[m * modes + j] = (iface.mortar_nodes[m + 1] - iface.mortar_nodes[m]) / (2 * j + 1);

  cross_ = DenseMatrix::Zero(trace_size(), mortar_size());
  const SegmentRule rule = quadrature_segment(3);
  for (const MergedSegment& seg : iface.merged.segments) {
    const int e = lower ? seg.lower_edge : seg.upper_edge;
    const int m = seg.mortar_element;
    const double a = edges[e][0], h = edge_length_[e];
    const double am = iface.mortar_nodes[m], hm = iface.mortar_nodes[m + 1] - am;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = seg.s0 + rule.points[q] * (seg.s1 - seg.s0);
      const double w = rule.weights[q] * (seg.s1 - seg.s0);
      const double te = (s - a) / h, tm = (s - am) / hm;
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < modes; ++j) cross_(2 * e + k, m * modes + j) += w * legendre(k, te) * legendre(j, tm);
    }
  }
}

Vector TraceProjection::to_trace(const Vector& mu) const { return (cross_ * mu).cwiseQuotient(trace_mass_); }

Vector TraceProjection::to_mortar(const Vector& t) const {
  return (cross_.transpose() * t).cwiseQuotient(mortar_mass_);
}

double coarseness_diagnostic(const TraceProjection& lower, const TraceProjection& upper) {
  // With diagonal masses, ||Q mu||_h = ||M_h^{-1/2} C mu|| and ||mu||_H = ||M_H^{1/2} mu||.
  const Vector mh_inv_sqrt_l = lower.trace_mass().cwiseSqrt().cwiseInverse();
  const Vector mh_inv_sqrt_u = upper.trace_mass().cwiseSqrt().cwiseInverse();
  const Vector mH_inv_sqrt = lower.mortar_mass().cwiseSqrt().cwiseInverse();
  DenseMatrix stacked(lower.trace_size() + upper.trace_size(), lower.mortar_size());
  stacked.topRows(lower.trace_size()) = mh_inv_sqrt_l.asDiagonal() * lower.cross() * mH_inv_sqrt.asDiagonal();
  stacked.bottomRows(upper.trace_size()) = mh_inv_sqrt_u.asDiagonal() * upper.cross() * mH_inv_sqrt.asDiagonal();
  Eigen::JacobiSVD<DenseMatrix> svd(stacked);
  return svd.singularValues().minCoeff();
}

}  // namespace biot_mortar
