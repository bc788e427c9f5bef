#pragma once

#include "biot_mortar/common.hpp"

#include <array>
#include <functional>

namespace biot_mortar {

enum class MechanicsBc { displacement, traction };
enum class FlowBc { pressure, flux };

/// Boundary condition types on one side of the global rectangle.
struct SideBc {
  MechanicsBc mechanics = MechanicsBc::displacement;
  FlowBc flow = FlowBc::pressure;
};

using ScalarField = std::function<double(double x, double y, double t)>;
using VectorField = std::function<Vec2(double x, double y, double t)>;
/// Boundary data that depends on the outward unit normal (traction, normal flux).
using NormalVectorField = std::function<Vec2(double x, double y, double t, Vec2 n)>;
using NormalScalarField = std::function<double(double x, double y, double t, Vec2 n)>;

/// Sources, boundary data and initial pressure of a Biot problem.
///
/// Displacement data enters the time-differentiated constitutive equation through its rate,
/// so sides with MechanicsBc::displacement need `displacement_rate` for stepping and
/// `displacement` for the initial elasticity solve.
struct ProblemData {
  std::array<SideBc, 4> sides{};
  VectorField body_force;
  ScalarField fluid_source;
  VectorField displacement;
  VectorField displacement_rate;
  NormalVectorField traction;  // sigma n on traction sides
  ScalarField pressure;        // p on pressure sides
  NormalScalarField normal_flux;  // z.n on flux sides
  std::function<double(double x, double y)> initial_pressure;

  /// All data zero; displacement + pressure conditions on every side.
  static ProblemData homogeneous();

  const SideBc& side(Side s) const { return sides[index(s)]; }
};

}  // namespace biot_mortar
