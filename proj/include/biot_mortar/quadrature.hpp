#pragma once

#include <array>
#include <vector>

namespace biot_mortar {

/// Gauss-Legendre rule on [0,1]. An n-point rule integrates degree 2n-1 exactly.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Tensor-product Gauss rule on [0,1]^2.
struct SquareRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
};

inline constexpr int max_quadrature_order = 5;

/// Throws InputError for order outside [1, max_quadrature_order].
SegmentRule quadrature_segment(int order);
SquareRule quadrature_volume(int order);

/// Legendre polynomial of degree `mode` (0..2) in t in [0,1], i.e. P_mode(2t-1).
double legendre(int mode, double t);

}  // namespace biot_mortar
