#include "biot_mortar/ddsolver.hpp"
#include "biot_mortar/verify.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace biot_mortar;

using namespace testing;

TEST_CASE("DD solution equals the monolithic coupled solve") {
  const ManufacturedSolution ms;
  for (bool mixed : {false, true})
    for (int degree : {1, 2}) {
      CAPTURE(mixed);
      CAPTURE(degree);
      auto dd = make_solver(testing::checkerboard(4, 6, 2, degree), mixed ? mixed_bc_problem(ms) : ms.problem(), 1e-3,
                            false, 1e-12);
      dd->initialize();
      const Monolithic mono = monolithic_step(*dd);
      dd->advance_step();
      const auto diff = field_differences(*dd, mono.x, mono.lambda);
      for (double d : diff) CHECK(d <= 1e-8);
    }
}

TEST_CASE("interface operator is positive definite in the mortar inner product") {
  const ManufacturedSolution ms;
  DomainSpec strip;
  strip.x1 = 3.0;
  strip.blocks_x = 3;
  strip.cells = {{5, 4}, {4, 3}, {6, 6}};
  strip.mortar_elements = 1;
  strip.mortar_degree = 2;
  std::vector<std::unique_ptr<DDSolver>> solvers;
  solvers.push_back(make_solver(testing::checkerboard(2, 3, 1, 1), ms.problem(), 1e-3));
  solvers.push_back(make_solver(testing::checkerboard(4, 6, 2, 2), mixed_bc_problem(ms), 1e-4));
  solvers.push_back(make_solver(strip, ms.problem(), 1e-2, false, 1e-6, 1e-3, 3.0, 50.0));
  std::mt19937_64 rng(99);
  for (auto& dd : solvers) {
    double smallest = 1e300;
    for (int trial = 0; trial < 100; ++trial) {
      const Vector l = testing::random_vector(rng, dd->mortar().size());
      smallest = std::min(smallest, dd->mortar().inner(dd->interface_apply(l), l) / dd->mortar().inner(l, l));
    }
    CHECK(smallest > 0.0);
  }
}

TEST_CASE("a unit pressure mortar drives flow into both neighbours") {
  const ManufacturedSolution ms;
  auto dd = make_solver(testing::checkerboard(2, 3, 1, 1), ms.problem(), 1e-3);
  const Interface& f = dd->meshes().interfaces[0];
  Vector l = Vector::Zero(dd->mortar().size());
  const int k = dd->mortar().index(0, 2, 0, 0);
  l[k] = 1.0;
  for (int s : {f.lower, f.upper}) {
    const Vector x = dd->solve_star(s, l);
    // Response component is -Q^T z.n with z.n outward: inflow makes it positive.
    CHECK(dd->response(s, x)[k] > 0.0);
    // Outward flux integrated over the interface is negative.
    const SideTrace tr = extract_side_trace(dd->meshes().subdomains[s], dd->layout(s), f.side_of(s), x, true);
    double flux = 0.0;
    for (const auto& e : tr) flux += e[2][0];
    CHECK(flux < 0.0);
  }
}

TEST_CASE("multiscale basis reproduces direct interface applications") {
  const ManufacturedSolution ms;
  auto dd = make_solver(testing::checkerboard(4, 6, 2, 1), mixed_bc_problem(ms), 1e-3);
  dd->build_msb();
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector l = testing::random_vector(rng, dd->mortar().size());
    const Vector direct = dd->interface_apply(l);
    worst = std::max(worst, (direct - dd->msb_apply(dd->msb(), l)).norm() / direct.norm());
  }
  CHECK(worst <= 1e-12);

  auto other = make_solver(testing::checkerboard(4, 6, 2, 1), ms.problem(), 2e-3);
  CHECK_THROWS_AS(other->msb_apply(dd->msb(), Vector::Zero(dd->mortar().size())), InputError);
}

TEST_CASE("runs with and without the multiscale basis agree") {
  const ManufacturedSolution ms;
  auto a = make_solver(testing::checkerboard(4, 6, 2, 2), ms.problem(), 1e-3, true);
  auto b = make_solver(testing::checkerboard(4, 6, 2, 2), ms.problem(), 1e-3, false);
  a->initialize();
  b->initialize();
  for (int n = 0; n < 5; ++n) {
    const StepReport ra = a->advance_step(), rb = b->advance_step();
    CHECK(ra.gmres_iterations == rb.gmres_iterations);
  }
  std::vector<Vector> ref;
  for (const auto& s : b->state().subdomains) ref.push_back(s.x);
  for (double d : field_differences(*a, ref, b->state().lambda_rate)) CHECK(d <= 1e-10);
  CHECK(testing::rel(a->state().lambda, b->state().lambda) <= 1e-10);
}

TEST_CASE("solve counts follow the GMRES and basis accounting") {
  const ManufacturedSolution ms;
  const int steps = 4;
  for (bool msb : {false, true}) {
    CAPTURE(msb);
    auto dd = make_solver(testing::checkerboard(2, 3, 1, 1), ms.problem(), 1e-3, msb);
    dd->initialize();
    const long init = dd->solve_counts().initialization;
    CHECK(init > 0);
    long gmres_sum = 0;
    for (int n = 0; n < steps; ++n) gmres_sum += dd->advance_step().gmres_iterations;
    const SolveCounts& c = dd->solve_counts();
    CHECK(c.initialization == init);
    for (int s = 0; s < dd->n_subdomains(); ++s) {
      const long nh = static_cast<long>(dd->mortar().subdomain_basis(dd->meshes(), s).size());
      CHECK(c.per_subdomain[s] == (msb ? nh : gmres_sum) + 2 * steps);
    }
    CHECK(c.msb_build == (msb ? 12 : 0));
    CHECK(c.max() == (msb ? 12 : gmres_sum) + 2 * steps);
    CHECK(c.total() == 4 * c.max());
  }
}

TEST_CASE("linear displacement with constant pressure is reproduced exactly") {
  // u = t (a x + b y, c x + d y), p = p0 constant: sigma is constant, f = 0, z = 0.
  const double a = 0.3, b = -0.2, c = 0.5, dd_ = 0.1, mu = 2.0, lam = 3.0, alpha = 1.0, p0 = 0.7;
  ProblemData p = ProblemData::homogeneous();
  p.displacement = [=](double x, double y, double t) { return Vec2{t * (a * x + b * y), t * (c * x + dd_ * y)}; };
  p.displacement_rate = [=](double x, double y, double) { return Vec2{a * x + b * y, c * x + dd_ * y}; };
  p.pressure = [=](double, double, double) { return p0; };
  p.initial_pressure = [=](double, double) { return p0; };
  p.fluid_source = [=](double, double, double) { return alpha * (a + dd_); };
  auto solver = make_solver(testing::checkerboard(2, 3, 1, 1), p, 0.1, false, 1e-12, 1.0, mu, lam);
  solver->initialize();
  solver->advance_step();
  solver->advance_step();
  const double t = 0.2;
  const double sxx = t * (2 * mu * a + lam * (a + dd_)) - alpha * p0, syy = t * (2 * mu * dd_ + lam * (a + dd_)) - alpha * p0;
  const double sxy = t * mu * (b + c);
  for (int s = 0; s < solver->n_subdomains(); ++s) {
    const SubdomainMesh& m = solver->meshes().subdomains[s];
    const SubdomainDofLayout& l = solver->layout(s);
    const SubdomainState& st = solver->state().subdomains[s];
    for (int cell = 0; cell < m.n_cells(); ++cell) {
      const Vec2 ctr = m.cell_center(cell);
      CHECK(st.u[cell] == doctest::Approx(t * (a * ctr.x + b * ctr.y)).epsilon(1e-8));
      CHECK(st.u[l.n_cells + cell] == doctest::Approx(t * (c * ctr.x + dd_ * ctr.y)).epsilon(1e-8));
      CHECK(st.rotation[cell] == doctest::Approx(t * 0.5 * (b - c)).epsilon(1e-8));
      CHECK(st.x[l.p(cell)] == doctest::Approx(p0).epsilon(1e-8));
    }
    // Mean normal stress DOFs on vertical edges are sigma_xx and sigma_yx; linear modes vanish.
    for (int e : m.side_edges(Side::left)) {
      CHECK(st.x[l.sigma(0, SubdomainDofLayout::bdm(e, 0))] == doctest::Approx(sxx).epsilon(1e-8));
      CHECK(st.x[l.sigma(1, SubdomainDofLayout::bdm(e, 0))] == doctest::Approx(sxy).epsilon(1e-8));
      CHECK(std::abs(st.x[l.sigma(0, SubdomainDofLayout::bdm(e, 1))]) < 1e-8);
    }
    for (int e : m.side_edges(Side::top)) CHECK(st.x[l.sigma(1, SubdomainDofLayout::bdm(e, 0))] == doctest::Approx(syy).epsilon(1e-8));
    for (int bdm = 0; bdm < l.n_bdm; ++bdm) CHECK(std::abs(st.x[l.z(bdm)]) < 1e-8);
  }
}

TEST_CASE("matching grids with trace-grid mortars reproduce the single-domain solution") {
  const ManufacturedSolution ms;
  DomainSpec single;
  single.cells = {{8, 8}};
  single.mortar_elements = match_trace_grid;
  DomainSpec split = testing::checkerboard(4, 4, match_trace_grid, 1);
  auto one = make_solver(single, ms.problem(), 1e-3, false, 1e-12);
  auto four = make_solver(split, ms.problem(), 1e-3, false, 1e-12);
  one->initialize();
  four->initialize();
  for (int n = 0; n < 2; ++n) {
    one->advance_step();
    four->advance_step();
  }
  const SubdomainMesh& big = one->meshes().subdomains[0];
  const SubdomainDofLayout& bl = one->layout(0);
  const Vector& xb = one->state().subdomains[0].x;
  double err = 0.0, ref = 0.0;
  for (int s = 0; s < 4; ++s) {
    const SubdomainMesh& m = four->meshes().subdomains[s];
    const SubdomainDofLayout& l = four->layout(s);
    const Vector& x = four->state().subdomains[s].x;
    for (int j = 0; j < m.ny(); ++j)
      for (int i = 0; i < m.nx(); ++i) {
        const int gc = big.cell(i + 4 * m.block_i(), j + 4 * m.block_j()), c = m.cell(i, j);
        for (auto [lk, bk] : {std::pair{l.p(c), bl.p(gc)}, std::pair{l.udot(0, c), bl.udot(0, gc)},
                               std::pair{l.udot(1, c), bl.udot(1, gc)}, std::pair{l.rotation(c), bl.rotation(gc)}}) {
          err += (x[lk] - xb[bk]) * (x[lk] - xb[bk]);
          ref += xb[bk] * xb[bk];
        }
        const auto dl = l.cell_bdm_dofs(m, c), db = bl.cell_bdm_dofs(big, gc);
        for (int a = 0; a < 8; ++a)
          for (auto [lk, bk] : {std::pair{l.sigma(0, dl[a]), bl.sigma(0, db[a])}, std::pair{l.sigma(1, dl[a]), bl.sigma(1, db[a])},
                                 std::pair{l.z(dl[a]), bl.z(db[a])}}) {
            err += (x[lk] - xb[bk]) * (x[lk] - xb[bk]);
            ref += xb[bk] * xb[bk];
          }
      }
  }
  CHECK(std::sqrt(err / ref) <= 1e-8);
}

TEST_CASE("weak continuity holds after a converged step") {
  const ManufacturedSolution ms;
  auto dd = make_solver(testing::checkerboard(4, 6, 2, 1), ms.problem(), 1e-3, false, 1e-10);
  dd->initialize();
  dd->advance_step();
  const Vector r = dd->continuity_residual();
  double scale = 0.0;
  for (int s = 0; s < dd->n_subdomains(); ++s) scale = std::max(scale, dd->state().subdomains[s].x.cwiseAbs().maxCoeff());
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-8 * scale);
}

TEST_CASE("results do not depend on the worker count") {
  const ManufacturedSolution ms;
  std::vector<Vector> runs;
  for (const char* threads : {"1", "3"}) {
    setenv("BIOT_MORTAR_THREADS", threads, 1);
    auto dd = make_solver(testing::checkerboard(4, 6, 2, 1), ms.problem(), 1e-3, false);
    dd->initialize();
    dd->advance_step();
    dd->advance_step();
    Vector all(0);
    for (const auto& s : dd->state().subdomains) {
      Vector next(all.size() + s.x.size());
      next << all, s.x;
      all = next;
    }
    runs.push_back(all);
  }
  unsetenv("BIOT_MORTAR_THREADS");
  CHECK((runs[0] - runs[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an unconverged interface solve is a numerical failure") {
  const ManufacturedSolution ms;
  DomainMeshes meshes = build_meshes(testing::checkerboard(2, 3, 1, 1));
  CellMaterial cell;
  cell.mu = cell.lambda = 100.0;
  MaterialField material = MaterialField::uniform(meshes, cell, 1.0, 1.0);
  SolverOptions o;
  o.dt = 1e-3;
  o.gmres_tol = 1e-12;
  o.gmres_max_it = 1;
  DDSolver dd(std::move(meshes), std::move(material), ms.problem(), o);
  CHECK_THROWS_AS(dd.initialize(), NumericalError);
}

TEST_CASE("pure traction on every side cannot be factorized") {
  ProblemData p = ProblemData::homogeneous();
  for (Side s : all_sides) p.sides[index(s)] = {MechanicsBc::traction, FlowBc::flux};
  DomainSpec single;
  single.cells = {{2, 2}};
  CHECK_THROWS_AS(make_solver(single, p, 1e-3), NumericalError);
}
