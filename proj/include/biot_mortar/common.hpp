#pragma once

#include <Eigen/Core>

#include <array>
#include <stdexcept>
#include <string>

namespace biot_mortar {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// 2x2 matrix, row-major: (xx, xy; yx, yy).
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  double trace() const { return xx + yy; }
  double frobenius_dot(const Mat2& o) const { return xx * o.xx + xy * o.xy + yx * o.yx + yy * o.yy; }
};

/// Invalid input: configuration, data files, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown: singular factorization, non-converged interface solve.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sides of a rectangle. Also used for the sides of the global domain.
enum class Side : int { left = 0, right = 1, bottom = 2, top = 3 };

inline constexpr std::array<Side, 4> all_sides = {Side::left, Side::right, Side::bottom, Side::top};

inline int index(Side s) { return static_cast<int>(s); }

inline Vec2 outward_normal(Side s) {
  switch (s) {
    case Side::left: return {-1.0, 0.0};
    case Side::right: return {1.0, 0.0};
    case Side::bottom: return {0.0, -1.0};
    case Side::top: return {0.0, 1.0};
  }
  return {};
}

/// +1 if the outward normal of `s` points along the positive coordinate axis.
inline double outward_sign(Side s) { return (s == Side::right || s == Side::top) ? 1.0 : -1.0; }

inline bool is_vertical(Side s) { return s == Side::left || s == Side::right; }

const char* side_name(Side s);

}  // namespace biot_mortar
