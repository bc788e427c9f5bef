#include "biot_mortar/verify.hpp"

#include "biot_mortar/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace biot_mortar {

namespace {
constexpr double pi = std::numbers::pi;
}

const std::array<const char*, n_tracked> tracked_names = {"sigma", "divsigma", "gamma", "u",   "z",
                                                           "divz",  "p",        "lamu",  "lamp"};

double ManufacturedSolution::p(double x, double y, double t) const {
  return std::exp(t) * (std::sin(pi * x) * std::cos(pi * y) + 10.0);
}

Vec2 ManufacturedSolution::grad_p(double x, double y, double t) const {
  const double e = std::exp(t);
  return {e * pi * std::cos(pi * x) * std::cos(pi * y), -e * pi * std::sin(pi * x) * std::sin(pi * y)};
}

Vec2 ManufacturedSolution::u(double x, double y, double t) const {
  const double e = std::exp(t);
  const double a = (1 - x) * (1 - y);
  return {e * (x * x * x * std::pow(y, 4) + x * x + std::sin(a) * std::cos(1 - y)),
          e * (std::pow(1 - x, 4) * std::pow(1 - y, 3) + (1 - y) * (1 - y) + std::cos(x * y) * std::sin(x))};
}

Mat2 ManufacturedSolution::grad_u(double x, double y, double t) const {
  const double e = std::exp(t);
  const double a = (1 - x) * (1 - y);
  const double ca = std::cos(a), sa = std::sin(a), c1 = std::cos(1 - y), s1 = std::sin(1 - y);
  Mat2 g;
  g.xx = 3 * x * x * std::pow(y, 4) + 2 * x - (1 - y) * ca * c1;
  g.xy = 4 * x * x * x * y * y * y - (1 - x) * ca * c1 + sa * s1;
  g.yx = -4 * std::pow(1 - x, 3) * std::pow(1 - y, 3) - y * std::sin(x * y) * std::sin(x) +
         std::cos(x * y) * std::cos(x);
  g.yy = -3 * std::pow(1 - x, 4) * (1 - y) * (1 - y) - 2 * (1 - y) - x * std::sin(x * y) * std::sin(x);
  return {e * g.xx, e * g.xy, e * g.yx, e * g.yy};
}

Mat2 ManufacturedSolution::sigma(double x, double y, double t) const {
  const Mat2 g = grad_u(x, y, t);
  const double div = g.xx + g.yy;
  const double pres = alpha * p(x, y, t);
  return {2 * mu * g.xx + lambda * div - pres, mu * (g.xy + g.yx), mu * (g.xy + g.yx), 2 * mu * g.yy + lambda * div - pres};
}

Vec2 ManufacturedSolution::div_sigma(double x, double y, double t) const {
  const double e = std::exp(t);
  const double a = (1 - x) * (1 - y);
  const double ca = std::cos(a), sa = std::sin(a), c1 = std::cos(1 - y), s1 = std::sin(1 - y);
  const double sxy = std::sin(x * y), cxy = std::cos(x * y), sx = std::sin(x), cx = std::cos(x);
  const double u1_xx = 6 * x * std::pow(y, 4) + 2 - (1 - y) * (1 - y) * sa * c1;
  const double u1_xy = 12 * x * x * y * y * y + ca * c1 - (1 - y) * (1 - x) * sa * c1 - (1 - y) * ca * s1;
  const double u1_yy = 12 * x * x * x * y * y - (1 - x) * (1 - x) * sa * c1 - 2 * (1 - x) * ca * s1 - sa * c1;
  const double u2_xx = 12 * (1 - x) * (1 - x) * std::pow(1 - y, 3) - y * y * cxy * sx - 2 * y * sxy * cx - cxy * sx;
  const double u2_xy = 12 * std::pow(1 - x, 3) * (1 - y) * (1 - y) - (sxy + x * y * cxy) * sx - x * sxy * cx;
  const double u2_yy = 6 * std::pow(1 - x, 4) * (1 - y) + 2 - x * x * cxy * sx;
  const Vec2 gp = grad_p(x, y, t);
  return {e * (mu * (2 * u1_xx + u1_yy + u2_xy) + lambda * (u1_xx + u2_xy)) - alpha * gp.x,
          e * (mu * (u1_xy + u2_xx + 2 * u2_yy) + lambda * (u1_xy + u2_yy)) - alpha * gp.y};
}

double ManufacturedSolution::rotation(double x, double y, double t) const {
  const Mat2 g = grad_u(x, y, t);
  return 0.5 * (g.xy - g.yx);
}

Vec2 ManufacturedSolution::z(double x, double y, double t) const {
  const Vec2 gp = grad_p(x, y, t);
  return {-gp.x, -gp.y};
}

double ManufacturedSolution::div_z(double x, double y, double t) const {
  return 2 * pi * pi * std::exp(t) * std::sin(pi * x) * std::cos(pi * y);
}

Vec2 ManufacturedSolution::f(double x, double y, double t) const {
  const Vec2 d = div_sigma(x, y, t);
  return {-d.x, -d.y};
}

double ManufacturedSolution::g(double x, double y, double t) const {
  // Every field carries the factor e^t, so time derivatives equal the fields.
  const Mat2 gu = grad_u(x, y, t);
  return c0 * p(x, y, t) + alpha * (gu.xx + gu.yy) + div_z(x, y, t);
}

std::vector<double> ManufacturedSolution::eval(const std::string& q, double x, double y, double t) const {
  if (q == "p") return {p(x, y, t)};
  if (q == "u") {
    const Vec2 v = u(x, y, t);
    return {v.x, v.y};
  }
  if (q == "sigma") {
    const Mat2 s = sigma(x, y, t);
    return {s.xx, s.xy, s.yx, s.yy};
  }
  if (q == "gamma") return {rotation(x, y, t)};
  if (q == "z") {
    const Vec2 v = z(x, y, t);
    return {v.x, v.y};
  }
  if (q == "f") {
    const Vec2 v = f(x, y, t);
    return {v.x, v.y};
  }
  if (q == "g") return {g(x, y, t)};
  if (q == "div_sigma") {
    const Vec2 v = div_sigma(x, y, t);
    return {v.x, v.y};
  }
  if (q == "div_z") return {div_z(x, y, t)};
  throw InputError("unknown quantity '" + q + "'");
}

ProblemData ManufacturedSolution::problem() const {
  ProblemData d;
  for (auto& s : d.sides) s = {MechanicsBc::displacement, FlowBc::pressure};
  const ManufacturedSolution m = *this;
  d.body_force = [m](double x, double y, double t) { return m.f(x, y, t); };
  d.fluid_source = [m](double x, double y, double t) { return m.g(x, y, t); };
  d.displacement = [m](double x, double y, double t) { return m.u(x, y, t); };
  d.displacement_rate = [m](double x, double y, double t) { return m.u(x, y, t); };
  d.traction = [m](double x, double y, double t, Vec2 n) {
    const Mat2 s = m.sigma(x, y, t);
    return Vec2{s.xx * n.x + s.xy * n.y, s.yx * n.x + s.yy * n.y};
  };
  d.pressure = [m](double x, double y, double t) { return m.p(x, y, t); };
  d.normal_flux = [m](double x, double y, double t, Vec2 n) {
    const Vec2 v = m.z(x, y, t);
    return v.x * n.x + v.y * n.y;
  };
  d.initial_pressure = [m](double x, double y) { return m.p(x, y, 0.0); };
  return d;
}

void ErrorAccumulator::add(const DDSolver& solver) {
  const StepState& st = solver.state();
  const double t = st.time;
  std::array<double, n_tracked> err{}, ref{};
  const SquareRule rule = quadrature_volume(order_);
  for (int s = 0; s < solver.n_subdomains(); ++s) {
    const SubdomainMesh& mesh = solver.meshes().subdomains[s];
    const SubdomainDofLayout& lay = solver.layout(s);
    const RectangleBDM1 fe(mesh.hx(), mesh.hy());
    const Vector& x = st.subdomains[s].x;
    const double area = mesh.cell_area();
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const auto dofs = lay.cell_bdm_dofs(mesh, c);
      std::array<double, 8> s0{}, s1{}, zc{};
      double div0 = 0, div1 = 0, divz = 0;
      for (int a = 0; a < 8; ++a) {
        s0[a] = x[lay.sigma(0, dofs[a])];
        s1[a] = x[lay.sigma(1, dofs[a])];
        zc[a] = x[lay.z(dofs[a])];
        div0 += s0[a] * fe.divergence()[a];
        div1 += s1[a] * fe.divergence()[a];
        divz += zc[a] * fe.divergence()[a];
      }
      const double ux = st.subdomains[s].u[c], uy = st.subdomains[s].u[lay.n_cells + c];
      const double rot = st.subdomains[s].rotation[c];
      const double ph = x[lay.p(c)];
      const Vec2 o = mesh.cell_origin(c);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double xi = rule.points[q][0], eta = rule.points[q][1];
        const double px = o.x + xi * mesh.hx(), py = o.y + eta * mesh.hy();
        const double w = rule.weights[q] * area;
        const auto phi = fe.values(xi, eta);
        Mat2 sh;
        Vec2 zh;
        for (int a = 0; a < 8; ++a) {
          sh.xx += s0[a] * phi[a].x;
          sh.xy += s0[a] * phi[a].y;
          sh.yx += s1[a] * phi[a].x;
          sh.yy += s1[a] * phi[a].y;
          zh.x += zc[a] * phi[a].x;
          zh.y += zc[a] * phi[a].y;
        }
        const Mat2 se = exact_.sigma(px, py, t);
        const Vec2 dse = exact_.div_sigma(px, py, t);
        const Vec2 ue = exact_.u(px, py, t);
        const Vec2 ze = exact_.z(px, py, t);
        const double re = exact_.rotation(px, py, t), pe = exact_.p(px, py, t), dze = exact_.div_z(px, py, t);
        const Mat2 ds{sh.xx - se.xx, sh.xy - se.xy, sh.yx - se.yx, sh.yy - se.yy};
        err[0] += w * ds.frobenius_dot(ds);
        ref[0] += w * se.frobenius_dot(se);
        err[1] += w * ((div0 - dse.x) * (div0 - dse.x) + (div1 - dse.y) * (div1 - dse.y));
        ref[1] += w * (dse.x * dse.x + dse.y * dse.y);
        err[2] += w * (rot - re) * (rot - re);
        ref[2] += w * re * re;
        err[3] += w * ((ux - ue.x) * (ux - ue.x) + (uy - ue.y) * (uy - ue.y));
        ref[3] += w * (ue.x * ue.x + ue.y * ue.y);
        err[4] += w * ((zh.x - ze.x) * (zh.x - ze.x) + (zh.y - ze.y) * (zh.y - ze.y));
        ref[4] += w * (ze.x * ze.x + ze.y * ze.y);
        err[5] += w * (divz - dze) * (divz - dze);
        ref[5] += w * dze * dze;
        err[6] += w * (ph - pe) * (ph - pe);
        ref[6] += w * pe * pe;
      }
    }
  }
  const SegmentRule line = quadrature_segment(5);
  const MortarSpace& ms = solver.mortar();
  for (const Interface& f : solver.meshes().interfaces) {
    for (int e = 0; e < f.mortar_elements(); ++e) {
      const double s0 = f.mortar_nodes[e], hs = f.mortar_nodes[e + 1] - s0;
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const double sq = s0 + line.points[q] * hs;
        const double w = line.weights[q] * hs;
        const Vec2 pt = interface_point(f, sq);
        const Vec2 ue = exact_.u(pt.x, pt.y, t);
        const double pe = exact_.p(pt.x, pt.y, t);
        const double lx = ms.evaluate(f, st.lambda, 0, sq), ly = ms.evaluate(f, st.lambda, 1, sq);
        const double lp = ms.evaluate(f, st.lambda, 2, sq);
        err[7] += w * ((lx - ue.x) * (lx - ue.x) + (ly - ue.y) * (ly - ue.y));
        ref[7] += w * (ue.x * ue.x + ue.y * ue.y);
        err[8] += w * (lp - pe) * (lp - pe);
        ref[8] += w * pe * pe;
      }
    }
  }
  for (int i = 0; i < n_tracked; ++i) {
    err_max_[i] = std::max(err_max_[i], std::sqrt(err[i]));
    ref_max_[i] = std::max(ref_max_[i], std::sqrt(ref[i]));
    err_sq_[i] += err[i];
    ref_sq_[i] += ref[i];
  }
  ++samples_;
}

std::array<double, n_tracked> ErrorAccumulator::relative() const {
  std::array<double, n_tracked> out{};
  for (int i = 0; i < n_tracked; ++i) {
    if (i == 5)
      out[i] = ref_sq_[i] > 0 ? std::sqrt(err_sq_[i] / ref_sq_[i]) : std::sqrt(err_sq_[i]);
    else
      out[i] = ref_max_[i] > 0 ? err_max_[i] / ref_max_[i] : err_max_[i];
  }
  return out;
}

double convergence_h(int degree, int level) {
  return degree == 1 ? 0.25 / (1 << level) : 0.25 / (1 << (2 * level));
}

DomainSpec convergence_domain(int degree, int level) {
  if (degree != 1 && degree != 2) throw InputError("mortar degree must be 1 or 2");
  if (level < 0 || level > (degree == 1 ? 6 : 3)) throw InputError("refinement level out of range");
  const int refine = degree == 1 ? (1 << level) : (1 << (2 * level));
  DomainSpec spec;
  spec.blocks_x = spec.blocks_y = 2;
  const int coarse = 2 * refine, fine = 3 * refine;
  spec.cells = {{coarse, coarse}, {fine, fine}, {fine, fine}, {coarse, coarse}};
  spec.mortar_degree = degree;
  spec.mortar_elements = 1 << level;
  return spec;
}

ConvergenceRow run_manufactured(const DomainSpec& spec, const ManufacturedSolution& exact, double dt, int steps,
                                bool use_msb, double gmres_tol) {
  DomainMeshes meshes = build_meshes(spec);
  CellMaterial cell;
  cell.mu = exact.mu;
  cell.lambda = exact.lambda;
  MaterialField material = MaterialField::uniform(meshes, cell, exact.c0, exact.alpha);
  SolverOptions opt;
  opt.dt = dt;
  opt.use_msb = use_msb;
  opt.gmres_tol = gmres_tol;
  DDSolver solver(std::move(meshes), std::move(material), exact.problem(), opt);
  solver.initialize();
  ErrorAccumulator acc(exact);
  ConvergenceRow row;
  for (int n = 0; n < steps; ++n) {
    const StepReport r = solver.advance_step();
    row.gmres = std::max(row.gmres, r.gmres_iterations);
    acc.add(solver);
  }
  row.errors = acc.relative();
  row.rates.fill(std::numeric_limits<double>::quiet_NaN());
  return row;
}

RateTable run_convergence(const ConvergenceOptions& o, const std::function<void(const ConvergenceRow&)>& progress) {
  if (o.levels < 1) throw InputError("at least one refinement level is required");
  if (o.steps < 1) throw InputError("at least one time step is required");
  ManufacturedSolution exact;
  exact.c0 = o.c0;
  RateTable table;
  for (int level = 0; level < o.levels; ++level) {
    ConvergenceRow row = run_manufactured(convergence_domain(o.degree, level), exact, o.dt, o.steps, o.use_msb,
                                          o.gmres_tol);
    row.h = convergence_h(o.degree, level);
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      for (int i = 0; i < n_tracked; ++i)
        row.rates[i] = std::log(prev.errors[i] / row.errors[i]) / std::log(prev.h / row.h);
    }
    table.rows.push_back(row);
    if (progress) progress(row);
  }
  return table;
}

std::string RateTable::to_csv() const {
  std::ostringstream out;
  out << rate_table_header << '\n';
  char buf[64];
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g", r.h);
    out << buf << ',' << r.gmres;
    for (int i = 0; i < n_tracked; ++i) {
      std::snprintf(buf, sizeof buf, "%.6e", r.errors[i]);
      out << ',' << buf << ',';
      if (!std::isnan(r.rates[i])) {
        std::snprintf(buf, sizeof buf, "%.4f", r.rates[i]);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace biot_mortar
