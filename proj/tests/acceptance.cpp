// One line per acceptance criterion. Exit status is non-zero when any criterion fails.
#include "biot_mortar/bench.hpp"
#include "biot_mortar/verify.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace biot_mortar;
using namespace testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Indices into the tracked quantities with their target rates.
const std::vector<std::pair<int, double>> linear_targets = {{0, 1.95}, {1, 1.0}, {2, 1.0}, {3, 1.0},
                                                             {6, 1.0},  {7, 2.0}, {8, 2.0}};

Outcome check_rates(const RateTable& t, const std::vector<std::pair<int, double>>& targets, double tol) {
  Outcome o;
  const ConvergenceRow& last = t.rows.back();
  for (auto [q, target] : targets) {
    const double r = last.rates[q];
    const bool ok = std::abs(r - target) <= tol;
    o.pass = o.pass && ok;
    o.detail += std::string(tracked_names[q]) + "=" + fmt(r) + (ok ? "" : "(want " + fmt(target) + ")") + " ";
  }
  return o;
}

void progress(const ConvergenceRow& r) {
  std::fprintf(stderr, "  h=%g gmres=%d e_u=%.3e\n", r.h, r.gmres, r.errors[3]);
}

Outcome linear_convergence() {
  ConvergenceOptions o;
  return check_rates(run_convergence(o, progress), linear_targets, 0.2);
}

Outcome quadratic_convergence() {
  ConvergenceOptions o;
  o.degree = 2;
  o.levels = 3;
  const RateTable t = run_convergence(o, progress);
  const double rs = t.rows.back().rates[0], ru = t.rows.back().rates[3];
  Outcome out;
  out.pass = rs >= 1.8 && std::abs(ru - 1.0) <= 0.15;
  out.detail = "sigma=" + fmt(rs) + " (want >= 1.8) u=" + fmt(ru) + " (want 1 +- 0.15)";
  return out;
}

Outcome small_storage_convergence() {
  ConvergenceOptions o;
  o.c0 = 1e-3;
  const RateTable t = run_convergence(o, progress);
  Outcome out = check_rates(t, linear_targets, 0.25);
  for (const ConvergenceRow& r : t.rows)
    for (double e : r.errors)
      if (!std::isfinite(e) || e > 1.0) {
        out.pass = false;
        out.detail += "blow-up ";
      }
  return out;
}

Outcome schur_equivalence() {
  const ManufacturedSolution ms;
  double worst = 0.0;
  for (bool mixed : {false, true})
    for (int degree : {1, 2}) {
      auto dd = make_solver(checkerboard(6, 8, 2, degree), mixed ? mixed_bc_problem(ms) : ms.problem(), 1e-3, false,
                            1e-12);
      dd->initialize();
      const Monolithic mono = monolithic_step(*dd);
      dd->advance_step();
      for (double d : field_differences(*dd, mono.x, mono.lambda)) worst = std::max(worst, d);
    }
  return {worst <= 1e-8, "max field difference " + fmt(worst)};
}

std::vector<std::unique_ptr<DDSolver>> positivity_solvers() {
  const ManufacturedSolution ms;
  DomainSpec strip;
  strip.x1 = 3.0;
  strip.blocks_x = 3;
  strip.cells = {{5, 4}, {4, 3}, {6, 6}};
  strip.mortar_elements = 1;
  strip.mortar_degree = 2;
  std::vector<std::unique_ptr<DDSolver>> out;
  out.push_back(make_solver(checkerboard(2, 3, 1, 1), ms.problem(), 1e-3));
  out.push_back(make_solver(checkerboard(4, 6, 2, 2), mixed_bc_problem(ms), 1e-4));
  out.push_back(make_solver(strip, ms.problem(), 1e-2, false, 1e-6, 1e-3, 3.0, 50.0));
  return out;
}

Outcome positivity() {
  std::mt19937_64 rng(7);
  double smallest = 1e300;
  for (auto& dd : positivity_solvers())
    for (int trial = 0; trial < 100; ++trial) {
      const Vector l = random_vector(rng, dd->mortar().size());
      smallest = std::min(smallest, dd->mortar().inner(dd->interface_apply(l), l) / dd->mortar().inner(l, l));
    }
  return {smallest > 0.0, "smallest Rayleigh quotient " + fmt(smallest)};
}

Outcome msb_exactness() {
  const ManufacturedSolution ms;
  auto dd = make_solver(checkerboard(4, 6, 2, 1), mixed_bc_problem(ms), 1e-3);
  dd->build_msb();
  std::mt19937_64 rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector l = random_vector(rng, dd->mortar().size());
    const Vector direct = dd->interface_apply(l);
    worst = std::max(worst, (direct - dd->msb_apply(dd->msb(), l)).norm() / direct.norm());
  }
  auto a = make_solver(checkerboard(4, 6, 2, 2), ms.problem(), 1e-3, true);
  auto b = make_solver(checkerboard(4, 6, 2, 2), ms.problem(), 1e-3, false);
  a->initialize();
  b->initialize();
  for (int n = 0; n < 10; ++n) {
    a->advance_step();
    b->advance_step();
  }
  std::vector<Vector> ref;
  for (const auto& s : b->state().subdomains) ref.push_back(s.x);
  double fields = 0.0;
  for (double d : field_differences(*a, ref, b->state().lambda_rate)) fields = std::max(fields, d);
  return {worst <= 1e-12 && fields <= 1e-10, "apply " + fmt(worst) + ", fields after 10 steps " + fmt(fields)};
}

struct BenchSuite {
  BenchFields fields = load_fields("", "", 42);
  BenchOptions options;
  std::map<std::string, BenchRun> msb;
  BenchRun direct_1lin;
  bool have_direct = false;

  const BenchRun& with_msb(const std::string& name) {
    auto it = msb.find(name);
    if (it == msb.end()) {
      std::fprintf(stderr, "  bench %s with MSB\n", name.c_str());
      it = msb.emplace(name, run_bench(fields, options, bench_mortar_config(name), true)).first;
    }
    return it->second;
  }
  const BenchRun& without_msb() {
    if (!have_direct) {
      std::fprintf(stderr, "  bench 1lin without MSB\n");
      direct_1lin = run_bench(fields, options, bench_mortar_config("1lin"), false);
      have_direct = true;
    }
    return direct_1lin;
  }
};

Outcome solve_accounting(BenchSuite& bench) {
  Outcome o;
  // Exact formulas on a manufactured run, per subdomain.
  const ManufacturedSolution ms;
  const int steps = 4;
  for (bool use_msb : {false, true}) {
    auto dd = make_solver(checkerboard(4, 6, 2, 1), ms.problem(), 1e-3, use_msb);
    dd->initialize();
    long gmres = 0;
    for (int n = 0; n < steps; ++n) gmres += dd->advance_step().gmres_iterations;
    const SolveCounts& c = dd->solve_counts();
    for (int s = 0; s < dd->n_subdomains(); ++s) {
      const long basis = static_cast<long>(dd->mortar().subdomain_basis(dd->meshes(), s).size());
      const long expect = (use_msb ? basis : gmres) + 2L * steps;
      if (c.per_subdomain[s] != expect) {
        o.pass = false;
        o.detail += "subdomain " + std::to_string(s) + " counted " + std::to_string(c.per_subdomain[s]) +
                    " expected " + std::to_string(expect) + "; ";
      }
    }
  }
  const BenchRun& d = bench.without_msb();
  const BenchRun& m = bench.with_msb("1lin");
  const int nt = bench.options.steps;
  if (d.solves_max != d.gmres_total + 2L * nt || m.solves_max != m.msb_build_solves + 2L * nt) {
    o.pass = false;
    o.detail += "benchmark counts off formula; ";
  }
  const double ratio = static_cast<double>(d.solves_max) / m.solves_max;
  o.pass = o.pass && ratio >= 10.0;
  o.detail += "1lin solves " + std::to_string(d.solves_max) + " without MSB, " + std::to_string(m.solves_max) +
              " with (ratio " + fmt(ratio) + ")";
  return o;
}

Outcome projection_orthogonality_all() {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (const Config& cfg : interface_configs()) {
    const auto [q, qt] = projection_orthogonality(cfg.spec, rng, 100);
    worst = std::max({worst, q, qt});
  }
  return {worst <= 1e-12, "max residual " + fmt(worst)};
}

Outcome fd_oracle() {
  double worst = 0.0;
  for (double c0 : {1.0, 1e-3}) {
    ManufacturedSolution m;
    m.c0 = c0;
    const Residuals r = fd_residuals(m, 1000, 10);
    worst = std::max({worst, r.f, r.g, r.sigma, r.z});
  }
  return {worst <= 1e-8, "max residual " + fmt(worst)};
}

Outcome coarse_mortar_iterations(BenchSuite& bench) {
  const double fine = bench.with_msb("fine").gmres_average;
  Outcome o;
  o.detail = "fine " + fmt(fine);
  for (const char* name : {"1lin", "1quad", "2lin", "2quad"}) {
    const double avg = bench.with_msb(name).gmres_average;
    o.pass = o.pass && avg < fine;
    o.detail += std::string(", ") + name + " " + fmt(avg);
  }
  return o;
}

}  // namespace

int main() {
  BenchSuite bench;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"linear mortar convergence rates", linear_convergence},
      {"quadratic mortar convergence rates", quadratic_convergence},
      {"small storage coefficient rates", small_storage_convergence},
      {"interface solve equals monolithic solve", schur_equivalence},
      {"interface operator positivity", positivity},
      {"multiscale basis exactness", msb_exactness},
      {"subdomain solve accounting", [&] { return solve_accounting(bench); }},
      {"mortar projection orthogonality", projection_orthogonality_all},
      {"manufactured solution finite-difference check", fd_oracle},
      {"coarse mortars need fewer iterations", [&] { return coarse_mortar_iterations(bench); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
