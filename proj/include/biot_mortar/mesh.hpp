#pragma once

#include "biot_mortar/common.hpp"

#include <array>
#include <vector>

namespace biot_mortar {

/// Mortar resolution marker: one mortar element per trace edge of the coarser side ("fine scale").
inline constexpr int match_trace_grid = 0;

/// Layout of the global rectangle as an array of rectangular blocks, one subdomain per block.
struct DomainSpec {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  int blocks_x = 1;
  int blocks_y = 1;
  /// Optional block breakpoints (blocks_x+1 / blocks_y+1 values). Empty means uniform blocks.
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
  /// Cell counts (nx, ny) per block, block-row-major (x index fastest).
  std::vector<std::array<int, 2>> cells;
  /// Mortar elements per interface, or match_trace_grid.
  int mortar_elements = 1;
  int mortar_degree = 1;
};

struct EdgeGeometry {
  bool vertical = true;  // normal along +x if vertical, +y otherwise
  Vec2 start;            // endpoint with the smaller coordinate
  double length = 0.0;
  int lower_cell = -1;   // left/bottom neighbour, -1 on the boundary
  int upper_cell = -1;   // right/top neighbour, -1 on the boundary
};

/// Structured nx x ny grid of one rectangular block.
///
/// Cells are numbered row-major. Vertical edges come first (index j*(nx+1)+i for the edge at
/// x_i between rows j), then horizontal edges (offset + j*nx + i for the edge at y_j). Every
/// edge carries a fixed normal pointing in the positive coordinate direction.
class SubdomainMesh {
 public:
  SubdomainMesh(int id, int block_i, int block_j, double x0, double y0, double x1, double y1, int nx, int ny);

  int id() const { return id_; }
  int block_i() const { return block_i_; }
  int block_j() const { return block_j_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double x1() const { return x1_; }
  double y1() const { return y1_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return (x1_ - x0_) / nx_; }
  double hy() const { return (y1_ - y0_) / ny_; }
  double cell_area() const { return hx() * hy(); }

  int n_cells() const { return nx_ * ny_; }
  int n_vertical_edges() const { return (nx_ + 1) * ny_; }
  int n_edges() const { return n_vertical_edges() + nx_ * (ny_ + 1); }

  int cell(int i, int j) const { return j * nx_ + i; }
  int vertical_edge(int i, int j) const { return j * (nx_ + 1) + i; }
  int horizontal_edge(int i, int j) const { return n_vertical_edges() + j * nx_ + i; }

  /// Edges of a cell ordered left, right, bottom, top.
  std::array<int, 4> cell_edges(int c) const;
  Vec2 cell_origin(int c) const;
  Vec2 cell_center(int c) const;
  EdgeGeometry edge(int e) const;

  /// Edges on one side of the block, ordered by increasing coordinate.
  std::vector<int> side_edges(Side s) const;
  /// Interface id attached to a side, or -1 for the exterior boundary.
  int side_interface(Side s) const { return side_interface_[index(s)]; }
  void set_side_interface(Side s, int id) { side_interface_[index(s)] = id; }
  bool on_exterior(Side s) const { return side_interface(s) < 0; }

 private:
  int id_, block_i_, block_j_;
  double x0_, y0_, x1_, y1_;
  int nx_, ny_;
  std::array<int, 4> side_interface_ = {-1, -1, -1, -1};
};

struct MergedSegment {
  double s0 = 0.0, s1 = 0.0;
  int mortar_element = -1;
  int lower_edge = -1;  // position along the interface of the trace edge of the lower/left side
  int upper_edge = -1;
};

/// Common refinement of the mortar grid and both trace grids of one interface.
struct MergedInterfacePartition {
  std::vector<double> breakpoints;
  std::vector<MergedSegment> segments;
};

/// Shared edge between two blocks, parameterized by arc length s in [0, length].
struct Interface {
  int id = -1;
  bool vertical = true;  // x = position if vertical, y = position otherwise
  int lower = -1;        // subdomain on the left (vertical) or below (horizontal)
  int upper = -1;
  double position = 0.0;
  double start = 0.0;  // coordinate along the interface where s = 0
  double end = 0.0;
  std::vector<double> mortar_nodes;  // in s, ascending, size n_mort + 1
  std::vector<double> lower_nodes;   // trace grid of `lower`, in s
  std::vector<double> upper_nodes;
  MergedInterfacePartition merged;

  double length() const { return end - start; }
  int mortar_elements() const { return static_cast<int>(mortar_nodes.size()) - 1; }
  /// Side of the subdomain that touches this interface.
  Side side_of(int subdomain) const;
};

struct DomainMeshes {
  DomainSpec spec;
  std::vector<SubdomainMesh> subdomains;
  std::vector<Interface> interfaces;

  double area() const { return (spec.x1 - spec.x0) * (spec.y1 - spec.y0); }
  /// Interfaces touching a subdomain, ascending by id.
  std::vector<int> interfaces_of(int subdomain) const;
};

DomainMeshes build_meshes(const DomainSpec& spec);

/// Arc-length interval [s0, s1] of every edge of `mesh` lying on `iface`, in the order of
/// SubdomainMesh::side_edges. Both neighbours of the interface agree on the parameter.
std::vector<std::array<double, 2>> interface_arclength_map(const SubdomainMesh& mesh, const Interface& iface);
std::array<double, 2> interface_arclength(const SubdomainMesh& mesh, const Interface& iface, int edge);

/// Sorted union of breakpoint sets; points closer than tol*scale collapse to one.
std::vector<double> merge_breakpoints(const std::vector<std::vector<double>>& sets, double scale);

/// Builds the merged partition and checks that every mortar element contains at least one whole
/// trace edge from each side. Throws InputError if the mortar grid is too fine.
MergedInterfacePartition merge_interface_grids(const std::vector<double>& mortar, const std::vector<double>& lower,
                                               const std::vector<double>& upper);

}  // namespace biot_mortar
