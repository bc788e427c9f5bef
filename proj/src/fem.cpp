#include "biot_mortar/fem.hpp"

#include "biot_mortar/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace biot_mortar {

RectangleBDM1::RectangleBDM1(double hx, double hy) : hx_(hx), hy_(hy) {
  if (!(hx > 0.0) || !(hy > 0.0)) throw InputError("BDM1 element needs positive edge lengths");
  Matrix8 d;
  for (int j = 0; j < n_dofs; ++j) {
    const auto moments = interpolate([&](double xi, double eta) { return monomials(xi, eta)[j]; });
    for (int i = 0; i < n_dofs; ++i) d(i, j) = moments[i];
  }
  coef_ = d.inverse();
  for (int k = 0; k < n_dofs; ++k) div_[k] = coef_(1, k) / hx_ + coef_(5, k) / hy_;
}

std::array<Vec2, 8> RectangleBDM1::monomials(double xi, double eta) const {
  const double r = hy_ / hx_;
  return {{{1.0, 0.0},
           {xi, 0.0},
           {eta, 0.0},
           {0.0, 1.0},
           {0.0, xi},
           {0.0, eta},
           {xi * xi, -2.0 * r * xi * eta},
           {2.0 * xi * eta, -r * eta * eta}}};
}

std::array<Vec2, 8> RectangleBDM1::values(double xi, double eta) const {
  const auto m = monomials(xi, eta);
  std::array<Vec2, 8> out{};
  for (int k = 0; k < n_dofs; ++k)
    for (int j = 0; j < n_dofs; ++j) {
      out[k].x += coef_(j, k) * m[j].x;
      out[k].y += coef_(j, k) * m[j].y;
    }
  return out;
}

RectangleBDM1::Matrix8 RectangleBDM1::duality() const {
  Matrix8 d;
  for (int j = 0; j < n_dofs; ++j) {
    const auto moments = interpolate([&](double xi, double eta) { return values(xi, eta)[j]; });
    for (int i = 0; i < n_dofs; ++i) d(i, j) = moments[i];
  }
  return d;
}

ElementMatrices element_matrices(double hx, double hy) {
  const RectangleBDM1 fe(hx, hy);
  const SquareRule rule = quadrature_volume(3);
  ElementMatrices em;
  em.area = hx * hy;
  em.mass.setZero();
  em.mass_xx.setZero();
  em.mass_xy.setZero();
  em.mass_yy.setZero();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto phi = fe.values(rule.points[q][0], rule.points[q][1]);
    const double jxw = rule.weights[q] * em.area;
    for (int a = 0; a < 8; ++a) {
      em.integral_x[a] += jxw * phi[a].x;
      em.integral_y[a] += jxw * phi[a].y;
      for (int b = 0; b < 8; ++b) {
        em.mass_xx(a, b) += jxw * phi[a].x * phi[b].x;
        em.mass_xy(a, b) += jxw * phi[a].x * phi[b].y;
        em.mass_yy(a, b) += jxw * phi[a].y * phi[b].y;
      }
    }
  }
  em.mass = em.mass_xx + em.mass_yy;
  em.divergence = fe.divergence();
  return em;
}

Mat2 compliance_apply(double mu, double lambda, const Mat2& tau) {
  const double shift = lambda / (2.0 * mu + 2.0 * lambda) * tau.trace();
  const double s = 1.0 / (2.0 * mu);
  return {s * (tau.xx - shift), s * tau.xy, s * tau.yx, s * (tau.yy - shift)};
}

MaterialField MaterialField::uniform(const DomainMeshes& meshes, const CellMaterial& m, double c0, double alpha) {
  MaterialField field;
  field.c0 = c0;
  field.alpha = alpha;
  for (const auto& mesh : meshes.subdomains) field.cells.emplace_back(mesh.n_cells(), m);
  return field;
}

void MaterialField::validate(const DomainMeshes& meshes) const {
  if (cells.size() != meshes.subdomains.size()) throw InputError("material field does not match the subdomain count");
  if (!(c0 >= 0.0)) throw InputError("storativity c0 must be non-negative");
  if (!(alpha >= 0.0)) throw InputError("Biot-Willis coefficient must be non-negative");
  for (std::size_t s = 0; s < cells.size(); ++s) {
    if (static_cast<int>(cells[s].size()) != meshes.subdomains[s].n_cells())
      throw InputError("material field does not match the cell count of subdomain " + std::to_string(s));
    for (std::size_t c = 0; c < cells[s].size(); ++c) {
      const CellMaterial& m = cells[s][c];
      const double det = m.k_xx * m.k_yy - m.k_xy * m.k_xy;
      if (!(m.mu > 0.0) || !(m.lambda >= 0.0) || !(m.k_xx > 0.0) || !(det > 0.0)) {
        std::ostringstream msg;
        msg << "invalid material in subdomain " << s << " cell " << c << ": mu=" << m.mu << " lambda=" << m.lambda
            << " K=[" << m.k_xx << "," << m.k_xy << ";" << m.k_xy << "," << m.k_yy << "]";
        throw InputError(msg.str());
      }
    }
  }
}

std::array<int, 8> SubdomainDofLayout::cell_bdm_dofs(const SubdomainMesh& mesh, int cell) const {
  const auto edges = mesh.cell_edges(cell);
  std::array<int, 8> dofs{};
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 2; ++m) dofs[RectangleBDM1::local_dof(k, m)] = bdm(edges[k], m);
  return dofs;
}

}  // namespace biot_mortar
