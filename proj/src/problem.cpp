#include "biot_mortar/problem.hpp"

namespace biot_mortar {

ProblemData ProblemData::homogeneous() {
  ProblemData d;
  const VectorField zero_vector = [](double, double, double) { return Vec2{}; };
  const ScalarField zero_scalar = [](double, double, double) { return 0.0; };
  d.body_force = zero_vector;
  d.fluid_source = zero_scalar;
  d.displacement = zero_vector;
  d.displacement_rate = zero_vector;
  d.traction = [](double, double, double, Vec2) { return Vec2{}; };
  d.pressure = zero_scalar;
  d.normal_flux = [](double, double, double, Vec2) { return 0.0; };
  d.initial_pressure = [](double, double) { return 0.0; };
  return d;
}

}  // namespace biot_mortar
