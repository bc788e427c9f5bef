#pragma once

#include "biot_mortar/common.hpp"
#include "biot_mortar/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace biot_mortar {

/// Lowest-order Brezzi-Douglas-Marini element on an axis-aligned hx x hy rectangle.
///
/// Local coordinates (xi, eta) in [0,1]^2. The space is P1^2 plus the two divergence-free
/// quadratic fields curl(x^2 y), curl(x y^2). Local edges are ordered left, right, bottom,
/// top; edge k carries DOFs 2k (mean normal component) and 2k+1 (linear Legendre moment),
/// so that on the edge v.n(t) = d_{2k} + d_{2k+1} (2t - 1). Normals point along +x on
/// vertical edges and +y on horizontal ones, never outward.
class RectangleBDM1 {
 public:
  static constexpr int n_dofs = 8;
  using Matrix8 = Eigen::Matrix<double, 8, 8>;

  RectangleBDM1(double hx, double hy);

  double hx() const { return hx_; }
  double hy() const { return hy_; }

  std::array<Vec2, 8> values(double xi, double eta) const;
  /// Divergence of each shape function (constant on the element).
  const std::array<double, 8>& divergence() const { return div_; }
  /// dof_i(shape_j); the identity up to round-off.
  Matrix8 duality() const;
  /// Applies the eight DOF functionals to an arbitrary field given in local coordinates.
  template <class Field>
  std::array<double, 8> interpolate(const Field& field) const;

  static int local_dof(int local_edge, int mode) { return 2 * local_edge + mode; }
  /// +1 if the fixed normal of local edge k is the outward normal, -1 otherwise.
  static double outward_sign(int local_edge) { return (local_edge == 1 || local_edge == 3) ? 1.0 : -1.0; }

 private:
  std::array<Vec2, 8> monomials(double xi, double eta) const;

  double hx_, hy_;
  Matrix8 coef_;  // column k holds shape k in the monomial basis
  std::array<double, 8> div_{};
};

/// Constant-coefficient element integrals of one rectangle size, 3x3 Gauss.
struct ElementMatrices {
  RectangleBDM1::Matrix8 mass;     // (phi_a . phi_b)
  RectangleBDM1::Matrix8 mass_xx;  // (phi_a,x  phi_b,x)
  RectangleBDM1::Matrix8 mass_xy;  // (phi_a,x  phi_b,y)
  RectangleBDM1::Matrix8 mass_yy;
  std::array<double, 8> integral_x{};  // (phi_a,x, 1)
  std::array<double, 8> integral_y{};
  std::array<double, 8> divergence{};
  double area = 0.0;
};

ElementMatrices element_matrices(double hx, double hy);

/// Piecewise constant material data of one cell. K is the symmetric conductivity tensor.
struct CellMaterial {
  double mu = 1.0;
  double lambda = 0.0;
  double k_xx = 1.0, k_xy = 0.0, k_yy = 1.0;
};

/// Isotropic compliance A tau = (tau - lambda / (2 mu + 2 lambda) tr(tau) I) / (2 mu) in 2D.
Mat2 compliance_apply(double mu, double lambda, const Mat2& tau);

struct MaterialField {
  std::vector<std::vector<CellMaterial>> cells;  // [subdomain][cell]
  double c0 = 1.0;
  double alpha = 1.0;

  static MaterialField uniform(const DomainMeshes& meshes, const CellMaterial& m, double c0, double alpha);
  /// Throws InputError unless mu > 0, lambda >= 0, K SPD in every cell and c0, alpha >= 0.
  void validate(const DomainMeshes& meshes) const;
};

/// Index maps of the five fields on one subdomain.
///
/// Order: sigma row 0, sigma row 1 (BDM1 each), udot x, udot y (Q0), rotation rate (Q0,
/// the scalar r of [[0, r], [-r, 0]]), z (BDM1), p (Q0). BDM1 DOF of mesh edge e, mode k is 2e+k.
/// The first elasticity_size() entries form the elasticity-only system.
struct SubdomainDofLayout {
  int n_bdm = 0;
  int n_cells = 0;

  explicit SubdomainDofLayout(const SubdomainMesh& mesh) : n_bdm(2 * mesh.n_edges()), n_cells(mesh.n_cells()) {}

  static int bdm(int edge, int mode) { return 2 * edge + mode; }
  int sigma(int row, int bdm_dof) const { return row * n_bdm + bdm_dof; }
  int udot(int comp, int cell) const { return 2 * n_bdm + comp * n_cells + cell; }
  int rotation(int cell) const { return 2 * n_bdm + 2 * n_cells + cell; }
  int z(int bdm_dof) const { return 2 * n_bdm + 3 * n_cells + bdm_dof; }
  int p(int cell) const { return 3 * n_bdm + 3 * n_cells + cell; }
  int size() const { return 3 * n_bdm + 4 * n_cells; }
  int elasticity_size() const { return 2 * n_bdm + 3 * n_cells; }

  std::array<int, 8> cell_bdm_dofs(const SubdomainMesh& mesh, int cell) const;
};

template <class Field>
std::array<double, 8> RectangleBDM1::interpolate(const Field& field) const {
  // Same moments as the duality matrix, applied to a general field.
  static constexpr double pts[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
  static constexpr double wts[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  std::array<double, 8> d{};
  for (int q = 0; q < 3; ++q) {
    const double t = pts[q];
    const double leg[2] = {1.0, 3.0 * (2.0 * t - 1.0)};
    const Vec2 vl = field(0.0, t), vr = field(1.0, t), vb = field(t, 0.0), vt = field(t, 1.0);
    for (int m = 0; m < 2; ++m) {
      d[local_dof(0, m)] += wts[q] * leg[m] * vl.x;
      d[local_dof(1, m)] += wts[q] * leg[m] * vr.x;
      d[local_dof(2, m)] += wts[q] * leg[m] * vb.y;
      d[local_dof(3, m)] += wts[q] * leg[m] * vt.y;
    }
  }
  return d;
}

}  // namespace biot_mortar
