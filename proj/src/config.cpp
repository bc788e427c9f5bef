#include "biot_mortar/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace biot_mortar {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Walks one JSON object, remembering which keys were consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw InputError(where() + " must be an object");
  }

  const json& get(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw InputError("missing required key " + where(key));
    return j_.at(key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, where(key)) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    const json* v = find(key);
    return v ? as_integer(*v, where(key)) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw InputError(where(key) + " must be true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw InputError(where(key) + " must be a string");
    return v->get<std::string>();
  }

  Vec2 vec2(const std::string& key, Vec2 fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    const std::vector<double> a = numbers(*v, where(key), 2);
    return {a[0], a[1]};
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw InputError("unknown key " + where(it.key()));
  }

  std::string where(const std::string& key = "") const {
    const std::string p = key.empty() ? path_ : (path_.empty() ? key : path_ + "." + key);
    return "'" + (p.empty() ? std::string("<root>") : p) + "'";
  }

  static double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw InputError(what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(what + " must be finite");
    return d;
  }

  static int as_integer(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw InputError(what + " must be an integer");
    return v.get<int>();
  }

  static std::vector<double> numbers(const json& v, const std::string& what, std::size_t n) {
    if (!v.is_array() || v.size() != n)
      throw InputError(what + " must be an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (const json& e : v) out.push_back(as_number(e, what));
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::array<int, 2> cell_pair(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) throw InputError(what + " must be a pair [nx, ny]");
  return {ObjectReader::as_integer(v[0], what), ObjectReader::as_integer(v[1], what)};
}

DomainSpec parse_domain(const json& j) {
  ObjectReader r(j, "domain");
  if (r.integer("dimension", 2) != 2) throw InputError("only two-dimensional domains are supported");
  if (r.string("element", "rectangle") != "rectangle")
    throw InputError("only axis-aligned rectangular elements are supported");
  DomainSpec d;
  d.x0 = r.number("x0", 0.0);
  d.y0 = r.number("y0", 0.0);
  d.x1 = r.number("x1", 1.0);
  d.y1 = r.number("y1", 1.0);
  const std::array<int, 2> blocks = cell_pair(r.get("blocks"), r.where("blocks"));
  d.blocks_x = blocks[0];
  d.blocks_y = blocks[1];
  if (d.blocks_x < 1 || d.blocks_y < 1) throw InputError(r.where("blocks") + " must be positive");
  const json& cells = r.get("cells");
  const std::string cw = r.where("cells");
  // Either one [nx, ny] pair for every block or a list with one pair per block.
  if (cells.is_array() && cells.size() == 2 && cells[0].is_number()) {
    d.cells.assign(static_cast<std::size_t>(d.blocks_x) * d.blocks_y, cell_pair(cells, cw));
  } else {
    if (!cells.is_array()) throw InputError(cw + " must be [nx, ny] or a list of pairs");
    for (const json& c : cells) d.cells.push_back(cell_pair(c, cw));
  }
  for (const char* axis : {"x_breaks", "y_breaks"}) {
    if (const json* b = r.find(axis)) {
      if (!b->is_array()) throw InputError(r.where(axis) + " must be an array of numbers");
      std::vector<double>& out = axis[0] == 'x' ? d.x_breaks : d.y_breaks;
      for (const json& e : *b) out.push_back(ObjectReader::as_number(e, r.where(axis)));
    }
  }
  r.finish();
  return d;
}

void parse_mortar(const json& j, DomainSpec& d) {
  ObjectReader r(j, "mortar");
  d.mortar_degree = r.integer("degree", 1);
  if (d.mortar_degree < 1 || d.mortar_degree > 2) throw InputError(r.where("degree") + " must be 1 or 2");
  if (const json* e = r.find("elements")) {
    if (e->is_string() && e->get<std::string>() == "match") {
      d.mortar_elements = match_trace_grid;
    } else {
      d.mortar_elements = ObjectReader::as_integer(*e, r.where("elements"));
      if (d.mortar_elements < 1) throw InputError(r.where("elements") + " must be positive or \"match\"");
    }
  }
  r.finish();
}

MaterialConfig parse_material(const json& j) {
  ObjectReader r(j, "material");
  MaterialConfig m;
  const std::string type = r.string("type", "uniform");
  if (type == "uniform") {
    m.kind = MaterialConfig::Kind::uniform;
    m.mu = r.number("mu", m.mu);
    m.lambda = r.number("lambda", m.lambda);
    if (const json* k = r.find("permeability")) {
      if (k->is_number()) {
        const double v = ObjectReader::as_number(*k, r.where("permeability"));
        m.permeability = {v, 0.0, v};
      } else {
        const std::vector<double> a = ObjectReader::numbers(*k, r.where("permeability"), 3);
        m.permeability = {a[0], a[1], a[2]};
      }
    }
    if (!(m.mu > 0.0)) throw InputError("'material.mu' must be positive");
    if (!(m.lambda >= 0.0)) throw InputError("'material.lambda' must be non-negative");
    const auto& k = m.permeability;
    if (!(k[0] > 0.0 && k[0] * k[2] - k[1] * k[1] > 0.0))
      throw InputError("'material.permeability' must be symmetric positive definite");
  } else if (type == "fields") {
    m.kind = MaterialConfig::Kind::fields;
    m.permeability_file = r.string("permeability", "");
    m.porosity_file = r.string("porosity", "");
    m.grid_nx = r.integer("nx", m.grid_nx);
    m.grid_ny = r.integer("ny", m.grid_ny);
    m.poisson_ratio = r.number("poisson_ratio", m.poisson_ratio);
    m.e_scale = r.number("e_scale", m.e_scale);
    m.e_exponent = r.number("e_exponent", m.e_exponent);
    m.c_crit = r.number("c_crit", m.c_crit);
    if (m.grid_nx < 1 || m.grid_ny < 1) throw InputError("'material.nx' and 'material.ny' must be positive");
    if (!(m.poisson_ratio >= 0.0 && m.poisson_ratio < 0.5))
      throw InputError("'material.poisson_ratio' must lie in [0, 0.5)");
    if (!(m.e_scale > 0.0) || !(m.c_crit > 0.0 && m.c_crit <= 1.0))
      throw InputError("'material.e_scale' must be positive and 'material.c_crit' in (0, 1]");
  } else {
    throw InputError("'material.type' must be \"uniform\" or \"fields\"");
  }
  r.finish();
  return m;
}

SideConfig parse_side(const json& j, const std::string& name) {
  ObjectReader r(j, "boundary." + name);
  SideConfig s;
  const std::string mech = r.string("mechanics", "displacement");
  if (mech == "displacement") s.bc.mechanics = MechanicsBc::displacement;
  else if (mech == "traction") s.bc.mechanics = MechanicsBc::traction;
  else throw InputError(r.where("mechanics") + " must be \"displacement\" or \"traction\"");
  const std::string flow = r.string("flow", "pressure");
  if (flow == "pressure") s.bc.flow = FlowBc::pressure;
  else if (flow == "flux") s.bc.flow = FlowBc::flux;
  else throw InputError(r.where("flow") + " must be \"pressure\" or \"flux\"");
  s.displacement = r.vec2("displacement", {});
  s.traction = r.vec2("traction", {});
  s.pressure = r.number("pressure", 0.0);
  s.flux = r.number("flux", 0.0);
  r.finish();
  return s;
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Global side containing a boundary point, -1 for interior points.
int side_from_point(const DomainSpec& d, double x, double y) {
  const double tx = 1e-12 * (d.x1 - d.x0), ty = 1e-12 * (d.y1 - d.y0);
  if (std::abs(x - d.x0) <= tx) return index(Side::left);
  if (std::abs(x - d.x1) <= tx) return index(Side::right);
  if (std::abs(y - d.y0) <= ty) return index(Side::bottom);
  if (std::abs(y - d.y1) <= ty) return index(Side::top);
  return -1;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const std::size_t bol = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t column = byte - (bol == std::string::npos ? 0 : bol + 1) + 1;
    throw InputError("config parse error at line " + std::to_string(line_of(text, byte)) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
  ObjectReader r(root, "");
  RunConfig c;
  c.schema_version = ObjectReader::as_integer(r.get("schema_version"), "'schema_version'");
  if (c.schema_version != run_config_schema_version)
    throw InputError("unsupported schema_version " + std::to_string(c.schema_version) + " (expected " +
                     std::to_string(run_config_schema_version) + ")");
  c.domain = parse_domain(r.get("domain"));
  if (const json* m = r.find("mortar")) parse_mortar(*m, c.domain);
  if (const json* m = r.find("material")) c.material = parse_material(*m);
  c.c0 = r.number("c0", c.c0);
  c.alpha = r.number("alpha", c.alpha);
  c.dt = r.number("dt", c.dt);
  c.steps = r.integer("steps", c.steps);
  if (!(c.c0 >= 0.0)) throw InputError("'c0' must be non-negative");
  if (!(c.alpha >= 0.0)) throw InputError("'alpha' must be non-negative");
  if (!(c.dt > 0.0)) throw InputError("'dt' must be positive");
  if (c.steps < 1) throw InputError("'steps' must be at least 1");
  if (const json* b = r.find("boundary")) {
    ObjectReader br(*b, "boundary");
    for (Side s : all_sides)
      if (const json* sj = br.find(side_name(s))) c.sides[index(s)] = parse_side(*sj, side_name(s));
    br.finish();
  }
  c.body_force = r.vec2("body_force", {});
  c.fluid_source = r.number("fluid_source", 0.0);
  if (const json* p = r.find("initial_pressure")) {
    if (p->is_number()) {
      c.initial_pressure = {ObjectReader::as_number(*p, "'initial_pressure'"), 0.0, 0.0};
    } else {
      const std::vector<double> a = ObjectReader::numbers(*p, "'initial_pressure'", 3);
      c.initial_pressure = {a[0], a[1], a[2]};
    }
  }
  if (const json* s = r.find("solver")) {
    ObjectReader sr(*s, "solver");
    c.use_msb = sr.boolean("msb", c.use_msb);
    c.gmres_tol = sr.number("gmres_tol", c.gmres_tol);
    c.gmres_max_it = sr.integer("gmres_max_it", c.gmres_max_it);
    if (!(c.gmres_tol > 0.0 && c.gmres_tol < 1.0)) throw InputError("'solver.gmres_tol' must lie in (0, 1)");
    if (c.gmres_max_it < 0) throw InputError("'solver.gmres_max_it' must be non-negative");
    sr.finish();
  }
  if (const json* o = r.find("output")) {
    ObjectReader orr(*o, "output");
    c.metrics_path = orr.string("metrics", "");
    c.vtk_path = orr.string("vtk", "");
    orr.finish();
  }
  if (const json* s = r.find("seed")) {
    if (!s->is_number_unsigned()) throw InputError("'seed' must be a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  r.finish();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

ProblemData make_problem(const RunConfig& c) {
  ProblemData p = ProblemData::homogeneous();
  for (Side s : all_sides) p.sides[index(s)] = c.sides[index(s)].bc;
  const DomainSpec d = c.domain;
  const auto sides = c.sides;
  auto side_at = [d, sides](double x, double y) -> const SideConfig* {
    const int k = side_from_point(d, x, y);
    return k < 0 ? nullptr : &sides[k];
  };
  p.displacement = [side_at](double x, double y, double) {
    const SideConfig* s = side_at(x, y);
    return s ? s->displacement : Vec2{};
  };
  p.displacement_rate = [](double, double, double) { return Vec2{}; };
  p.traction = [side_at](double x, double y, double, Vec2) {
    const SideConfig* s = side_at(x, y);
    return s ? s->traction : Vec2{};
  };
  p.pressure = [side_at](double x, double y, double) {
    const SideConfig* s = side_at(x, y);
    return s ? s->pressure : 0.0;
  };
  p.normal_flux = [side_at](double x, double y, double, Vec2) {
    const SideConfig* s = side_at(x, y);
    return s ? s->flux : 0.0;
  };
  const Vec2 f = c.body_force;
  p.body_force = [f](double, double, double) { return f; };
  const double g = c.fluid_source;
  p.fluid_source = [g](double, double, double) { return g; };
  const auto p0 = c.initial_pressure;
  p.initial_pressure = [p0](double x, double y) { return p0[0] + p0[1] * x + p0[2] * y; };
  return p;
}

std::unique_ptr<DDSolver> build_solver(const RunConfig& c, std::vector<std::string>* warnings, bool* synthetic) {
  DomainMeshes meshes = build_meshes(c.domain);
  MaterialField material;
  if (synthetic) *synthetic = false;
  if (c.material.kind == MaterialConfig::Kind::uniform) {
    CellMaterial cm;
    cm.mu = c.material.mu;
    cm.lambda = c.material.lambda;
    cm.k_xx = c.material.permeability[0];
    cm.k_xy = c.material.permeability[1];
    cm.k_yy = c.material.permeability[2];
    material = MaterialField::uniform(meshes, cm, c.c0, c.alpha);
  } else {
    const BenchFields fields = load_fields(c.material.permeability_file, c.material.porosity_file, c.seed,
                                           c.material.c_crit, c.material.grid_nx, c.material.grid_ny);
    if (synthetic) *synthetic = fields.synthetic;
    if (warnings) *warnings = fields.warnings;
    BenchOptions bo;
    bo.poisson_ratio = c.material.poisson_ratio;
    bo.c0 = c.c0;
    bo.alpha = c.alpha;
    bo.e_scale = c.material.e_scale;
    bo.e_exponent = c.material.e_exponent;
    bo.c_crit = c.material.c_crit;
    material = derive_materials(fields, meshes, bo);
  }
  material.validate(meshes);

  SolverOptions so;
  so.dt = c.dt;
  so.gmres_tol = c.gmres_tol;
  so.gmres_max_it = c.gmres_max_it;
  so.use_msb = c.use_msb;
  return std::make_unique<DDSolver>(std::move(meshes), std::move(material), make_problem(c), so);
}

RunResult run_simulation(const RunConfig& c) {
  RunResult out;
  bool synthetic = false;
  const std::unique_ptr<DDSolver> owner = build_solver(c, &out.warnings, &synthetic);
  DDSolver& solver = *owner;
  solver.initialize();

  ordered_json gmres_steps = ordered_json::array(), histories = ordered_json::array();
  long gmres_total = 0;
  int gmres_max = 0;
  for (int n = 0; n < c.steps; ++n) {
    const StepReport rep = solver.advance_step();
    gmres_steps.push_back(rep.gmres_iterations);
    histories.push_back(rep.residuals);
    gmres_total += rep.gmres_iterations;
    gmres_max = std::max(gmres_max, rep.gmres_iterations);
  }

  const GlobalFields fields = gather_fields(solver);
  const SolveCounts& counts = solver.solve_counts();
  const Vector cont = solver.continuity_residual();

  ordered_json m;
  m["schema_version"] = run_config_schema_version;
  m["subdomains"] = solver.n_subdomains();
  m["interface_dofs"] = solver.mortar().size();
  m["mortar"] = {{"degree", c.domain.mortar_degree}, {"elements", c.domain.mortar_elements}};
  m["material"] = {{"type", c.material.kind == MaterialConfig::Kind::uniform ? "uniform" : "fields"},
                   {"poisson_ratio", c.material.kind == MaterialConfig::Kind::uniform
                                         ? ordered_json(nullptr)
                                         : ordered_json(c.material.poisson_ratio)},
                   {"synthetic", synthetic}};
  m["dt"] = c.dt;
  m["steps"] = c.steps;
  m["final_time"] = solver.state().time;
  m["msb"] = c.use_msb;
  m["gmres"] = {{"per_step", gmres_steps},
                {"total", gmres_total},
                {"max", gmres_max},
                {"average", static_cast<double>(gmres_total) / c.steps}};
  m["residual_histories"] = histories;
  m["solves"] = {{"per_subdomain", counts.per_subdomain},
                 {"max", counts.max()},
                 {"total", counts.total()},
                 {"msb_build", counts.msb_build},
                 {"initialization", counts.initialization}};
  m["continuity_residual"] = cont.size() > 0 ? cont.cwiseAbs().maxCoeff() : 0.0;
  double pmin = 0.0, pmax = 0.0, umax = 0.0;
  if (!fields.pressure.empty()) {
    pmin = *std::min_element(fields.pressure.begin(), fields.pressure.end());
    pmax = *std::max_element(fields.pressure.begin(), fields.pressure.end());
    umax = *std::max_element(fields.displacement_magnitude.begin(), fields.displacement_magnitude.end());
  }
  m["fields"] = {{"nx", fields.nx}, {"ny", fields.ny}, {"pressure_min", pmin}, {"pressure_max", pmax},
                 {"displacement_max", umax}};
  m["warnings"] = out.warnings;
  out.metrics_json = m.dump(2) + "\n";
  out.vtk = to_vtk(fields, "biot_mortar run");
  return out;
}

}  // namespace biot_mortar
