#include "biot_mortar/quadrature.hpp"

#include "biot_mortar/common.hpp"

#include <cmath>

namespace biot_mortar {

namespace {

// Nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  switch (n) {
    case 1:
      x = {0.0};
      w = {2.0};
      return;
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      x = {-a, a};
      w = {1.0, 1.0};
      return;
    }
    case 3: {
      const double a = std::sqrt(3.0 / 5.0);
      x = {-a, 0.0, a};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      return;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      return;
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      x = {-b, -a, 0.0, a, b};
      w = {wb, wa, 128.0 / 225.0, wa, wb};
      return;
    }
    default:
      throw InputError("unsupported quadrature order " + std::to_string(n) + " (supported: 1.." +
                       std::to_string(max_quadrature_order) + ")");
  }
}

}  // namespace

SegmentRule quadrature_segment(int order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  SegmentRule rule;
  for (std::size_t q = 0; q < x.size(); ++q) {
    rule.points.push_back(0.5 * (x[q] + 1.0));
    rule.weights.push_back(0.5 * w[q]);
  }
  return rule;
}

SquareRule quadrature_volume(int order) {
  const SegmentRule line = quadrature_segment(order);
  SquareRule rule;
  for (std::size_t j = 0; j < line.points.size(); ++j)
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      rule.points.push_back({line.points[i], line.points[j]});
      rule.weights.push_back(line.weights[i] * line.weights[j]);
    }
  return rule;
}

double legendre(int mode, double t) {
  const double s = 2.0 * t - 1.0;
  switch (mode) {
    case 0: return 1.0;
    case 1: return s;
    case 2: return 0.5 * (3.0 * s * s - 1.0);
    default: throw InputError("Legendre mode " + std::to_string(mode) + " not supported");
  }
}

const char* side_name(Side s) {
  switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
  }
  return "?";
}

}  // namespace biot_mortar
