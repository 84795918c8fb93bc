#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace osm
{

using Point = Eigen::Vector2d;

enum class BoundaryTag : std::uint8_t
{
  interior = 0,
  left,
  right,
  bottom,
  top,
};

std::string_view to_string(BoundaryTag tag);

/// Parses "left", "right", "bottom" or "top"; anything else is invalid-argument.
BoundaryTag parse_boundary_tag(std::string_view name);

/// Affine map x = origin + jacobian * xhat from the reference triangle (0,0),(1,0),(0,1).
struct CellGeometry
{
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d jacobian_inv;
  double det = 0.0;

  double area() const { return 0.5 * det; }
  Point map(const Point &xhat) const { return origin + jacobian * xhat; }
  Point pullback(const Point &x) const { return jacobian_inv * (x - origin); }
};

/// Compressed adjacency list (offsets + flat ids).
struct Adjacency
{
  std::vector<int> offsets;
  std::vector<int> ids;

  std::span<const int> operator[](int i) const
  {
    return {ids.data() + offsets[i], ids.data() + offsets[i + 1]};
  }
  int size() const { return static_cast<int>(offsets.size()) - 1; }
};

/// Conforming triangulation of a planar polygon.
///
/// Local edge e of a cell joins local vertices (e+1)%3 -> (e+2)%3, i.e. it is the edge
/// opposite local vertex e. Cells are counterclockwise. Global edges are oriented from
/// the lower to the higher vertex index; edge_sign(c, e) is +1 when the local traversal
/// agrees with that orientation.
class Mesh
{
public:
  using EdgeTagger = std::function<BoundaryTag(int lo, int hi)>;

  /// Builds all connectivity. Boundary edges are tagged by `tagger(lo, hi)`.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
       const EdgeTagger &tagger);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  const Point &vertex(int v) const { return vertices_[v]; }
  const std::array<int, 2> &edge(int e) const { return edges_[e]; }
  const std::array<int, 3> &cell(int c) const { return cells_[c]; }
  const std::array<int, 3> &cell_edges(int c) const { return cell_edges_[c]; }
  int edge_sign(int c, int local_edge) const { return cell_edge_signs_[c][local_edge]; }

  /// Cells sharing edge e; second entry is -1 on the boundary.
  const std::array<int, 2> &edge_cells(int e) const { return edge_cells_[e]; }
  BoundaryTag edge_tag(int e) const { return edge_tags_[e]; }
  bool is_boundary_edge(int e) const { return edge_cells_[e][1] < 0; }

  std::span<const int> vertex_cells(int v) const { return vertex_cells_[v]; }
  std::span<const int> vertex_edges(int v) const { return vertex_edges_[v]; }

  const CellGeometry &geometry(int c) const { return geometry_[c]; }

  /// Local index (0..2) of global edge e within cell c, or -1.
  int local_edge_index(int c, int e) const;

  /// Outward unit normal of boundary edge e.
  Point outward_normal(int e) const;

  double total_area() const;
  double max_diameter() const;
  double min_diameter() const;

  /// Global edge index for the vertex pair, or -1.
  int find_edge(int a, int b) const;

private:
  std::vector<Point> vertices_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 3>> cell_edge_signs_;
  std::vector<std::array<int, 2>> edge_cells_;
  std::vector<BoundaryTag> edge_tags_;
  Adjacency vertex_cells_;
  Adjacency vertex_edges_;
  std::vector<CellGeometry> geometry_;
};

/// Parent information for one uniform red refinement.
struct RefinementMap
{
  /// Fine cell -> coarse cell. Children of coarse cell c are 4c..4c+3; child j < 3 holds
  /// coarse local vertex j, child 3 is the medial triangle.
  std::vector<int> cell_parent;
  /// Fine edge -> coarse edge (if edge_parent_is_cell is false) or coarse cell.
  std::vector<int> edge_parent;
  std::vector<bool> edge_parent_is_cell;
  /// Coarse edge -> its two fine halves, ordered from the coarse lo vertex to hi.
  std::vector<std::array<int, 2>> edge_children;
  /// Number of coarse vertices; fine vertex coarse_vertices + e is the midpoint of coarse edge e.
  int coarse_vertices = 0;
};

struct Refinement
{
  Mesh mesh;
  RefinementMap map;
};

/// nx x ny grid of the rectangle [0,width] x [0,height]; each quad is split along the
/// (i,j)-(i+1,j+1) diagonal.
Mesh build_rectangle_mesh(int nx, int ny, double width = 1.0, double height = 1.0);

/// Red refinement: every triangle is split into four congruent children.
Refinement refine_uniform(const Mesh &mesh);

class MeshHierarchy
{
public:
  /// levels()[0] is `coarse`; each further level is one uniform refinement.
  MeshHierarchy(Mesh coarse, int refinements);

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const Mesh &level(int l) const { return *levels_[l]; }
  std::shared_ptr<const Mesh> level_ptr(int l) const { return levels_[l]; }
  const Mesh &finest() const { return *levels_.back(); }

  /// Map from level l+1 to level l.
  const RefinementMap &refinement(int l) const { return maps_[l]; }

private:
  std::vector<std::shared_ptr<const Mesh>> levels_;
  std::vector<RefinementMap> maps_;
};

/// Plain-text dump: vertex list, cell list and tagged boundary edges.
void write_mesh(std::ostream &os, const Mesh &mesh);

}  // namespace osm
