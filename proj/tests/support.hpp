#pragma once

// Shared helpers for the test binaries. Quadrature here is computed independently of the
// library (Golub-Welsch via a dense eigen-solve) so it can serve as an oracle.

#include "biot_mortar/common.hpp"
#include "biot_mortar/mesh.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testing {

using biot_mortar::Vector;

struct Gauss {
  std::vector<double> x, w;  // on [0,1]
};

inline Gauss gauss_oracle(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Gauss g;
  for (int k = 0; k < n; ++k) {
    g.x.push_back(0.5 * (es.eigenvalues()[k] + 1.0));
    g.w.push_back(es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
  }
  return g;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, int n = 8) {
  const Gauss g = gauss_oracle(n);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += g.w[k] * f(a + (b - a) * g.x[k]);
  return s * (b - a);
}

inline double integrate2(const std::function<double(double, double)>& f, double x0, double x1, double y0, double y1,
                         int n = 8) {
  const Gauss g = gauss_oracle(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += g.w[i] * g.w[j] * f(x0 + (x1 - x0) * g.x[i], y0 + (y1 - y0) * g.x[j]);
  return s * (x1 - x0) * (y1 - y0);
}

// Legendre polynomials on [0,1] written out directly.
inline double leg(int k, double t) {
  const double s = 2.0 * t - 1.0;
  if (k == 0) return 1.0;
  if (k == 1) return s;
  return 1.5 * s * s - 0.5;
}

inline Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (int k = 0; k < n; ++k) v[k] = d(rng);
  return v;
}

inline double rel(const Vector& a, const Vector& b) {
  const double d = (a - b).norm(), s = b.norm();
  return s > 0.0 ? d / s : d;
}

// 2x2 checkerboard of the unit square with non-matching grids.
inline biot_mortar::DomainSpec checkerboard(int a, int b, int mortar_elements, int degree = 1) {
  biot_mortar::DomainSpec d;
  d.blocks_x = d.blocks_y = 2;
  d.cells = {{a, a}, {b, b}, {b, b}, {a, a}};
  d.mortar_elements = mortar_elements;
  d.mortar_degree = degree;
  return d;
}

}  // namespace testing
