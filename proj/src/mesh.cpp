#include "biot_mortar/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace biot_mortar {

SubdomainMesh::SubdomainMesh(int id, int block_i, int block_j, double x0, double y0, double x1, double y1, int nx,
                             int ny)
    : id_(id), block_i_(block_i), block_j_(block_j), x0_(x0), y0_(y0), x1_(x1), y1_(y1), nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw InputError("subdomain needs at least one cell in each direction");
  if (!(x1 > x0) || !(y1 > y0)) throw InputError("subdomain block has non-positive extent");
}

std::array<int, 4> SubdomainMesh::cell_edges(int c) const {
  const int i = c % nx_;
  const int j = c / nx_;
  return {vertical_edge(i, j), vertical_edge(i + 1, j), horizontal_edge(i, j), horizontal_edge(i, j + 1)};
}

Vec2 SubdomainMesh::cell_origin(int c) const {
  return {x0_ + (c % nx_) * hx(), y0_ + (c / nx_) * hy()};
}

Vec2 SubdomainMesh::cell_center(int c) const {
  const Vec2 o = cell_origin(c);
  return {o.x + 0.5 * hx(), o.y + 0.5 * hy()};
}

EdgeGeometry SubdomainMesh::edge(int e) const {
  EdgeGeometry g;
  if (e < n_vertical_edges()) {
    const int i = e % (nx_ + 1);
    const int j = e / (nx_ + 1);
    g.vertical = true;
    g.start = {x0_ + i * hx(), y0_ + j * hy()};
    g.length = hy();
    g.lower_cell = i > 0 ? cell(i - 1, j) : -1;
    g.upper_cell = i < nx_ ? cell(i, j) : -1;
  } else {
    const int k = e - n_vertical_edges();
    const int i = k % nx_;
    const int j = k / nx_;
    g.vertical = false;
    g.start = {x0_ + i * hx(), y0_ + j * hy()};
    g.length = hx();
    g.lower_cell = j > 0 ? cell(i, j - 1) : -1;
    g.upper_cell = j < ny_ ? cell(i, j) : -1;
  }
  return g;
}

std::vector<int> SubdomainMesh::side_edges(Side s) const {
  std::vector<int> edges;
  switch (s) {
    case Side::left:
      for (int j = 0; j < ny_; ++j) edges.push_back(vertical_edge(0, j));
      break;
    case Side::right:
      for (int j = 0; j < ny_; ++j) edges.push_back(vertical_edge(nx_, j));
      break;
    case Side::bottom:
      for (int i = 0; i < nx_; ++i) edges.push_back(horizontal_edge(i, 0));
      break;
    case Side::top:
      for (int i = 0; i < nx_; ++i) edges.push_back(horizontal_edge(i, ny_));
      break;
  }
  return edges;
}

Side Interface::side_of(int subdomain) const {
  if (subdomain == lower) return vertical ? Side::right : Side::top;
  if (subdomain == upper) return vertical ? Side::left : Side::bottom;
  throw InputError("subdomain " + std::to_string(subdomain) + " does not touch interface " + std::to_string(id));
}

std::vector<int> DomainMeshes::interfaces_of(int subdomain) const {
  std::vector<int> ids;
  for (const Interface& f : interfaces)
    if (f.lower == subdomain || f.upper == subdomain) ids.push_back(f.id);
  return ids;
}

namespace {

std::vector<double> block_breaks(const std::vector<double>& given, int n, double a, double b, const char* axis) {
  if (given.empty()) {
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = a + (b - a) * k / n;
    out[n] = b;
    return out;
  }
  if (static_cast<int>(given.size()) != n + 1)
    throw InputError(std::string("expected ") + std::to_string(n + 1) + " " + axis + " block breakpoints");
  const double tol = 1e-12 * (b - a);
  if (std::abs(given.front() - a) > tol || std::abs(given.back() - b) > tol)
    throw InputError(std::string("blocks leave a gap or overhang along ") + axis);
  for (int k = 0; k < n; ++k)
    if (!(given[k + 1] > given[k])) throw InputError(std::string("overlapping blocks along ") + axis);
  return given;
}

std::vector<double> uniform_nodes(double length, int n) {
  std::vector<double> s(n + 1);
  for (int k = 0; k <= n; ++k) s[k] = length * k / n;
  s[n] = length;
  return s;
}

int containing_interval(const std::vector<double>& nodes, double s) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
  int k = static_cast<int>(it - nodes.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(nodes.size()) - 2);
}

bool each_element_holds_an_edge(const std::vector<double>& mortar, const std::vector<double>& trace, double tol) {
  for (std::size_t e = 0; e + 1 < mortar.size(); ++e) {
    bool found = false;
    for (std::size_t k = 0; k + 1 < trace.size() && !found; ++k)
      found = trace[k] >= mortar[e] - tol && trace[k + 1] <= mortar[e + 1] + tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& sets, double scale) {
  std::vector<double> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  const double tol = 1e-12 * scale;
  for (double v : all)
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  return out;
}

MergedInterfacePartition merge_interface_grids(const std::vector<double>& mortar, const std::vector<double>& lower,
                                               const std::vector<double>& upper) {
  const double length = mortar.back() - mortar.front();
  const double tol = 1e-12 * length;
  if (!each_element_holds_an_edge(mortar, lower, tol) || !each_element_holds_an_edge(mortar, upper, tol)) {
    std::ostringstream msg;
    msg << "mortar grid with " << mortar.size() - 1 << " elements is finer than the adjacent trace grids ("
        << lower.size() - 1 << " and " << upper.size() - 1
        << " edges); every mortar element must contain a whole trace edge from each side";
    throw InputError(msg.str());
  }
  MergedInterfacePartition merged;
  merged.breakpoints = merge_breakpoints({mortar, lower, upper}, length);
  // Snap the ends so that segment lengths sum exactly to the interface length.
  merged.breakpoints.front() = mortar.front();
  merged.breakpoints.back() = mortar.back();
  for (std::size_t k = 0; k + 1 < merged.breakpoints.size(); ++k) {
    MergedSegment seg;
    seg.s0 = merged.breakpoints[k];
    seg.s1 = merged.breakpoints[k + 1];
    const double mid = 0.5 * (seg.s0 + seg.s1);
    seg.mortar_element = containing_interval(mortar, mid);
    seg.lower_edge = containing_interval(lower, mid);
    seg.upper_edge = containing_interval(upper, mid);
    merged.segments.push_back(seg);
  }
  return merged;
}

DomainMeshes build_meshes(const DomainSpec& spec) {
  if (!(spec.x1 > spec.x0) || !(spec.y1 > spec.y0)) throw InputError("global rectangle has non-positive extent");
  if (spec.blocks_x < 1 || spec.blocks_y < 1) throw InputError("need at least one subdomain block per direction");
  if (static_cast<int>(spec.cells.size()) != spec.blocks_x * spec.blocks_y)
    throw InputError("cell counts given for " + std::to_string(spec.cells.size()) + " blocks, layout has " +
                     std::to_string(spec.blocks_x * spec.blocks_y));
  if (spec.mortar_degree < 1 || spec.mortar_degree > 2) throw InputError("mortar degree must be 1 or 2");
  if (spec.mortar_elements < 0) throw InputError("mortar element count must be positive (or 0 for fine scale)");

  const auto xb = block_breaks(spec.x_breaks, spec.blocks_x, spec.x0, spec.x1, "x");
  const auto yb = block_breaks(spec.y_breaks, spec.blocks_y, spec.y0, spec.y1, "y");

  DomainMeshes out;
  out.spec = spec;
  for (int bj = 0; bj < spec.blocks_y; ++bj)
    for (int bi = 0; bi < spec.blocks_x; ++bi) {
      const int id = bj * spec.blocks_x + bi;
      const auto [nx, ny] = spec.cells[id];
      out.subdomains.emplace_back(id, bi, bj, xb[bi], yb[bj], xb[bi + 1], yb[bj + 1], nx, ny);
    }

  auto add_interface = [&](int lower, int upper, bool vertical) {
    Interface f;
    f.id = static_cast<int>(out.interfaces.size());
    f.vertical = vertical;
    f.lower = lower;
    f.upper = upper;
    const SubdomainMesh& a = out.subdomains[lower];
    const SubdomainMesh& b = out.subdomains[upper];
    f.position = vertical ? a.x1() : a.y1();
    f.start = vertical ? a.y0() : a.x0();
    f.end = vertical ? a.y1() : a.x1();
    const int na = vertical ? a.ny() : a.nx();
    const int nb = vertical ? b.ny() : b.nx();
    const int nm = spec.mortar_elements == match_trace_grid ? std::min(na, nb) : spec.mortar_elements;
    f.lower_nodes = uniform_nodes(f.length(), na);
    f.upper_nodes = uniform_nodes(f.length(), nb);
    f.mortar_nodes = uniform_nodes(f.length(), nm);
    try {
      f.merged = merge_interface_grids(f.mortar_nodes, f.lower_nodes, f.upper_nodes);
    } catch (const InputError& e) {
      throw InputError("interface " + std::to_string(f.id) + ": " + e.what());
    }
    out.subdomains[lower].set_side_interface(vertical ? Side::right : Side::top, f.id);
    out.subdomains[upper].set_side_interface(vertical ? Side::left : Side::bottom, f.id);
    out.interfaces.push_back(std::move(f));
  };

  for (int bj = 0; bj < spec.blocks_y; ++bj)
    for (int bi = 0; bi < spec.blocks_x; ++bi) {
      const int id = bj * spec.blocks_x + bi;
      if (bi + 1 < spec.blocks_x) add_interface(id, id + 1, true);
      if (bj + 1 < spec.blocks_y) add_interface(id, id + spec.blocks_x, false);
    }
  return out;
}

std::array<double, 2> interface_arclength(const SubdomainMesh& mesh, const Interface& iface, int edge) {
  const EdgeGeometry g = mesh.edge(edge);
  if (g.vertical != iface.vertical) throw InputError("edge orientation does not match the interface");
  const double along = iface.vertical ? g.start.y : g.start.x;
  const double s0 = along - iface.start;
  return {s0, s0 + g.length};
}

std::vector<std::array<double, 2>> interface_arclength_map(const SubdomainMesh& mesh, const Interface& iface) {
  std::vector<std::array<double, 2>> out;
  for (int e : mesh.side_edges(iface.side_of(mesh.id()))) out.push_back(interface_arclength(mesh, iface, e));
  return out;
}

}  // namespace biot_mortar
