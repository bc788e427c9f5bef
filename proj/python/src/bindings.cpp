#include "biot_mortar/bench.hpp"
#include "biot_mortar/config.hpp"
#include "biot_mortar/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

namespace py = pybind11;
using namespace biot_mortar;

namespace {

py::array_t<double> grid_array(const std::vector<double>& v, int nx, int ny) {
  py::array_t<double> a({ny, nx});
  std::memcpy(a.mutable_data(), v.data(), v.size() * sizeof(double));
  return a;
}

py::dict row_dict(const ConvergenceRow& r) {
  py::dict errors, rates;
  for (int q = 0; q < n_tracked; ++q) {
    errors[tracked_names[q]] = r.errors[q];
    rates[tracked_names[q]] = r.rates[q];
  }
  py::dict d;
  d["h"] = r.h;
  d["gmres"] = r.gmres;
  d["errors"] = errors;
  d["rates"] = rates;
  return d;
}

// Stepping wrapper around a solver built from a run config.
class Simulation {
 public:
  explicit Simulation(const std::string& config_text) : config_(parse_run_config(config_text)) {
    solver_ = build_solver(config_, &warnings_);
  }

  void initialize() { solver_->initialize(); }
  int step() { return solver_->advance_step().gmres_iterations; }
  double time() const { return solver_->state().time; }
  int interface_size() const { return solver_->mortar().size(); }
  int n_subdomains() const { return solver_->n_subdomains(); }
  Vector interface_apply(const Vector& l) { return solver_->interface_apply(check(l)); }
  Vector interface_rhs() { return solver_->interface_rhs(); }
  double mortar_inner(const Vector& a, const Vector& b) const { return solver_->mortar().inner(check(a), check(b)); }
  void build_msb() { solver_->build_msb(); }
  Vector msb_apply(const Vector& l) const { return solver_->msb_apply(solver_->msb(), check(l)); }
  Vector continuity_residual() const { return solver_->continuity_residual(); }
  py::dict solve_counts() const {
    const SolveCounts& c = solver_->solve_counts();
    py::dict d;
    d["per_subdomain"] = c.per_subdomain;
    d["max"] = c.max();
    d["total"] = c.total();
    d["msb_build"] = c.msb_build;
    d["initialization"] = c.initialization;
    return d;
  }
  py::dict fields() const {
    const GlobalFields g = gather_fields(*solver_);
    std::vector<double> vx, vy;
    for (const Vec2& v : g.velocity) {
      vx.push_back(v.x);
      vy.push_back(v.y);
    }
    py::dict d;
    d["pressure"] = grid_array(g.pressure, g.nx, g.ny);
    d["velocity_x"] = grid_array(vx, g.nx, g.ny);
    d["velocity_y"] = grid_array(vy, g.nx, g.ny);
    d["displacement_magnitude"] = grid_array(g.displacement_magnitude, g.nx, g.ny);
    d["extent"] = py::make_tuple(g.x0, g.x0 + g.nx * g.dx, g.y0, g.y0 + g.ny * g.dy);
    return d;
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  const Vector& check(const Vector& l) const {
    if (l.size() != solver_->mortar().size())
      throw InputError("mortar vector has " + std::to_string(l.size()) + " entries, expected " +
                       std::to_string(solver_->mortar().size()));
    return l;
  }

  RunConfig config_;
  std::vector<std::string> warnings_;
  std::unique_ptr<DDSolver> solver_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiscale mortar domain decomposition for poroelasticity";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.attr("tracked_quantities") = py::cast(std::vector<std::string>(tracked_names.begin(), tracked_names.end()));

  py::class_<ManufacturedSolution>(m, "ManufacturedSolution")
      .def(py::init([](double mu, double lambda, double alpha, double c0) {
             ManufacturedSolution s;
             s.mu = mu;
             s.lambda = lambda;
             s.alpha = alpha;
             s.c0 = c0;
             return s;
           }),
           py::arg("mu") = 100.0, py::arg("lam") = 100.0, py::arg("alpha") = 1.0, py::arg("c0") = 1.0)
      .def("eval", &ManufacturedSolution::eval, py::arg("quantity"), py::arg("x"), py::arg("y"), py::arg("t"));

  m.def(
      "run_convergence",
      [](int degree, double c0, double dt, int steps, int levels, bool msb, double gmres_tol,
         const std::function<void(py::dict)>& progress) {
        ConvergenceOptions o;
        o.degree = degree;
        o.c0 = c0;
        o.dt = dt;
        o.steps = steps;
        o.levels = levels;
        o.use_msb = msb;
        o.gmres_tol = gmres_tol;
        std::function<void(const ConvergenceRow&)> cb;
        if (progress) cb = [&](const ConvergenceRow& r) {
          py::gil_scoped_acquire gil;
          progress(row_dict(r));
        };
        RateTable t;
        {
          py::gil_scoped_release release;
          t = run_convergence(o, cb);
        }
        py::list rows;
        for (const ConvergenceRow& r : t.rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("degree") = 1, py::arg("c0") = 1.0, py::arg("dt") = 1e-4, py::arg("steps") = 100, py::arg("levels") = 4,
      py::arg("msb") = true, py::arg("gmres_tol") = 1e-6, py::arg("progress") = nullptr);

  m.def(
      "run",
      [](const std::string& config_text) {
        const RunConfig c = parse_run_config(config_text);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_simulation(c);
        }
        return py::make_tuple(r.metrics_json, r.vtk);
      },
      py::arg("config"), "Runs a JSON config; returns (metrics JSON text, VTK text).");

  m.def(
      "synthetic_fields",
      [](std::uint64_t seed, int nx, int ny) {
        const BenchFields f = synthetic_fields(seed, nx, ny);
        return py::make_tuple(grid_array(f.permeability.values, nx, ny), grid_array(f.porosity.values, nx, ny));
      },
      py::arg("seed") = 42, py::arg("nx") = 60, py::arg("ny") = 220);

  m.def(
      "field_checksum",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
        FieldGrid g;
        g.values.assign(a.data(), a.data() + a.size());
        return field_checksum(g);
      },
      py::arg("values"));

  m.def("youngs_modulus", [](double porosity, double e_scale, double e_exponent, double c_crit) {
    BenchOptions o;
    o.e_scale = e_scale;
    o.e_exponent = e_exponent;
    o.c_crit = c_crit;
    return youngs_modulus(porosity, o);
  }, py::arg("porosity"), py::arg("e_scale") = 100.0, py::arg("e_exponent") = 2.1, py::arg("c_crit") = 0.5);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const std::string&>(), py::arg("config"))
      .def("initialize", &Simulation::initialize, py::call_guard<py::gil_scoped_release>())
      .def("step", &Simulation::step, py::call_guard<py::gil_scoped_release>(),
           "Advances one time step; returns the GMRES iteration count.")
      .def_property_readonly("time", &Simulation::time)
      .def_property_readonly("interface_size", &Simulation::interface_size)
      .def_property_readonly("n_subdomains", &Simulation::n_subdomains)
      .def_property_readonly("warnings", &Simulation::warnings)
      .def("interface_apply", &Simulation::interface_apply, py::arg("mortar"))
      .def("interface_rhs", &Simulation::interface_rhs)
      .def("mortar_inner", &Simulation::mortar_inner, py::arg("a"), py::arg("b"))
      .def("build_msb", &Simulation::build_msb, py::call_guard<py::gil_scoped_release>())
      .def("msb_apply", &Simulation::msb_apply, py::arg("mortar"))
      .def("continuity_residual", &Simulation::continuity_residual)
      .def("solve_counts", &Simulation::solve_counts)
      .def("fields", &Simulation::fields);
}
