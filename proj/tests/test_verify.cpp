#include "biot_mortar/verify.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <sstream>

using namespace biot_mortar;

using namespace testing;

TEST_CASE("manufactured solution satisfies the Biot equations under finite differences") {
  for (double c0 : {1.0, 1e-3}) {
    ManufacturedSolution m;
    m.c0 = c0;
    const Residuals r = fd_residuals(m, 1000, 31);
    CHECK(r.grad_u <= 1e-8);
    CHECK(r.grad_p <= 1e-8);
    CHECK(r.sigma <= 1e-8);
    CHECK(r.rotation <= 1e-8);
    CHECK(r.div_sigma <= 1e-8);
    CHECK(r.f <= 1e-8);
    CHECK(r.z <= 1e-8);
    CHECK(r.div_z <= 1e-8);
    CHECK(r.g <= 1e-8);
  }
}

TEST_CASE("named evaluation") {
  const ManufacturedSolution m;
  CHECK(m.eval("p", 0.2, 0.3, 0.1)[0] == m.p(0.2, 0.3, 0.1));
  CHECK(m.eval("sigma", 0.2, 0.3, 0.1).size() == 4);
  CHECK(m.eval("u", 0.2, 0.3, 0.1)[1] == m.u(0.2, 0.3, 0.1).y);
  CHECK_THROWS_AS(m.eval("q", 0, 0, 0), InputError);
}

TEST_CASE("convergence ladders") {
  CHECK(convergence_h(1, 0) == 0.25);
  CHECK(convergence_h(1, 3) == 0.03125);
  CHECK(convergence_h(2, 2) == 1.0 / 64.0);
  const DomainSpec lin = convergence_domain(1, 2);
  CHECK(lin.cells[0][0] == 8);
  CHECK(lin.cells[1][0] == 12);
  CHECK(lin.mortar_elements == 4);
  CHECK(lin.mortar_degree == 1);
  // H = 2h on the coarse blocks: each mortar element spans two coarse cells.
  CHECK(0.5 / lin.mortar_elements == doctest::Approx(2 * convergence_h(1, 2)));
  const DomainSpec quad = convergence_domain(2, 1);
  CHECK(quad.cells[0][0] == 8);
  CHECK(quad.mortar_elements == 2);
  CHECK(0.5 / quad.mortar_elements == doctest::Approx(std::sqrt(convergence_h(2, 1))));
  CHECK_THROWS_AS(convergence_domain(3, 0), InputError);
  CHECK_THROWS_AS(convergence_domain(2, 4), InputError);
}

TEST_CASE("rate table: single level leaves rates blank, rates follow the log ratio") {
  ConvergenceOptions o;
  o.steps = 2;
  o.dt = 1e-3;
  o.levels = 1;
  const RateTable one = run_convergence(o);
  REQUIRE(one.rows.size() == 1);
  const std::string csv = one.to_csv();
  CHECK(csv.rfind(std::string(rate_table_header) + "\n", 0) == 0);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(row.find(",,") != std::string::npos);
  CHECK(std::count(row.begin(), row.end(), ',') == 19);

  o.levels = 2;
  const RateTable two = run_convergence(o);
  REQUIRE(two.rows.size() == 2);
  for (int q = 0; q < n_tracked; ++q) {
    CHECK(std::isnan(two.rows[0].rates[q]));
    const double expect = std::log(two.rows[0].errors[q] / two.rows[1].errors[q]) / std::log(2.0);
    CHECK(two.rows[1].rates[q] == doctest::Approx(expect));
    CHECK(two.rows[1].errors[q] < two.rows[0].errors[q]);
  }
  CHECK(two.rows[1].gmres > 0);

  o.levels = 0;
  CHECK_THROWS_AS(run_convergence(o), InputError);
}

TEST_CASE("MSB and direct runs give the same error norms") {
  const ManufacturedSolution m;
  const ConvergenceRow a = run_manufactured(convergence_domain(1, 0), m, 1e-3, 3, true, 1e-8);
  const ConvergenceRow b = run_manufactured(convergence_domain(1, 0), m, 1e-3, 3, false, 1e-8);
  for (int q = 0; q < n_tracked; ++q) {
    CHECK(a.errors[q] == doctest::Approx(b.errors[q]).epsilon(1e-8));
    CHECK(a.errors[q] > 0.0);
    CHECK(a.errors[q] < 1.0);
  }
}
