#include "osm/meshkit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "osm/error.hpp"

namespace osm
{

namespace
{

std::uint64_t edge_key(int a, int b)
{
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

Adjacency build_adjacency(int n, const std::vector<std::pair<int, int>> &pairs)
{
  Adjacency adj;
  adj.offsets.assign(n + 1, 0);
  for (const auto &[key, id] : pairs)
  {
    ++adj.offsets[key + 1];
  }
  for (int i = 0; i < n; ++i)
  {
    adj.offsets[i + 1] += adj.offsets[i];
  }
  adj.ids.resize(pairs.size());
  std::vector<int> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto &[key, id] : pairs)
  {
    adj.ids[fill[key]++] = id;
  }
  return adj;
}

}  // namespace

std::string_view to_string(BoundaryTag tag)
{
  switch (tag)
  {
    case BoundaryTag::interior:
      return "interior";
    case BoundaryTag::left:
      return "left";
    case BoundaryTag::right:
      return "right";
    case BoundaryTag::bottom:
      return "bottom";
    case BoundaryTag::top:
      return "top";
  }
  return "unknown";
}

BoundaryTag parse_boundary_tag(std::string_view name)
{
  if (name == "left")
  {
    return BoundaryTag::left;
  }
  if (name == "right")
  {
    return BoundaryTag::right;
  }
  if (name == "bottom")
  {
    return BoundaryTag::bottom;
  }
  if (name == "top")
  {
    return BoundaryTag::top;
  }
  throw Error(ErrorCode::invalid_argument, "unknown boundary tag '" + std::string(name) + "'");
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
           const EdgeTagger &tagger)
  : vertices_(std::move(vertices)), cells_(std::move(cells))
{
  const int nv = num_vertices();
  const int nc = num_cells();
  OSM_REQUIRE(nc > 0, ErrorCode::invalid_argument, "mesh has no cells");

  geometry_.resize(nc);
  for (int c = 0; c < nc; ++c)
  {
    for (int v : cells_[c])
    {
      OSM_REQUIRE(v >= 0 && v < nv, ErrorCode::invalid_argument, "cell vertex out of range");
    }
    CellGeometry &g = geometry_[c];
    g.origin = vertices_[cells_[c][0]];
    g.jacobian.col(0) = vertices_[cells_[c][1]] - g.origin;
    g.jacobian.col(1) = vertices_[cells_[c][2]] - g.origin;
    g.det = g.jacobian.determinant();
    OSM_REQUIRE(g.det > 0.0, ErrorCode::invalid_argument,
                "cell " + std::to_string(c) + " is not counterclockwise");
    g.jacobian_inv = g.jacobian.inverse();
  }

  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * static_cast<std::size_t>(nc));
  cell_edges_.resize(nc);
  cell_edge_signs_.resize(nc);
  for (int c = 0; c < nc; ++c)
  {
    for (int e = 0; e < 3; ++e)
    {
      const int a = cells_[c][(e + 1) % 3];
      const int b = cells_[c][(e + 2) % 3];
      const auto key = edge_key(a, b);
      auto it = lookup.find(key);
      int id;
      if (it == lookup.end())
      {
        id = num_edges();
        lookup.emplace(key, id);
        edges_.push_back({std::min(a, b), std::max(a, b)});
        edge_cells_.push_back({c, -1});
      }
      else
      {
        id = it->second;
        OSM_REQUIRE(edge_cells_[id][1] < 0, ErrorCode::invalid_argument,
                    "edge shared by more than two cells");
        edge_cells_[id][1] = c;
      }
      cell_edges_[c][e] = id;
      cell_edge_signs_[c][e] = a < b ? 1 : -1;
    }
  }

  edge_tags_.assign(num_edges(), BoundaryTag::interior);
  for (int e = 0; e < num_edges(); ++e)
  {
    if (is_boundary_edge(e))
    {
      edge_tags_[e] = tagger(edges_[e][0], edges_[e][1]);
      OSM_REQUIRE(edge_tags_[e] != BoundaryTag::interior, ErrorCode::invalid_argument,
                  "boundary edge left untagged");
    }
  }

  std::vector<std::pair<int, int>> vc;
  vc.reserve(3 * static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c)
  {
    for (int v : cells_[c])
    {
      vc.emplace_back(v, c);
    }
  }
  vertex_cells_ = build_adjacency(nv, vc);

  std::vector<std::pair<int, int>> ve;
  ve.reserve(2 * edges_.size());
  for (int e = 0; e < num_edges(); ++e)
  {
    ve.emplace_back(edges_[e][0], e);
    ve.emplace_back(edges_[e][1], e);
  }
  vertex_edges_ = build_adjacency(nv, ve);
}

int Mesh::local_edge_index(int c, int e) const
{
  for (int i = 0; i < 3; ++i)
  {
    if (cell_edges_[c][i] == e)
    {
      return i;
    }
  }
  return -1;
}

Point Mesh::outward_normal(int e) const
{
  const int c = edge_cells_[e][0];
  const int le = local_edge_index(c, e);
  const Point a = vertices_[cells_[c][(le + 1) % 3]];
  const Point b = vertices_[cells_[c][(le + 2) % 3]];
  const Point d = b - a;
  return Point(d.y(), -d.x()).normalized();
}

double Mesh::total_area() const
{
  double area = 0.0;
  for (const auto &g : geometry_)
  {
    area += g.area();
  }
  return area;
}

double Mesh::max_diameter() const
{
  double h = 0.0;
  for (const auto &e : edges_)
  {
    h = std::max(h, (vertices_[e[1]] - vertices_[e[0]]).norm());
  }
  return h;
}

double Mesh::min_diameter() const
{
  // Diameter of a triangle is its longest edge.
  double h = std::numeric_limits<double>::max();
  for (int c = 0; c < num_cells(); ++c)
  {
    double d = 0.0;
    for (int e : cell_edges_[c])
    {
      d = std::max(d, (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm());
    }
    h = std::min(h, d);
  }
  return h;
}

int Mesh::find_edge(int a, int b) const
{
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  for (int e : vertex_edges(lo))
  {
    if (edges_[e][1] == hi)
    {
      return e;
    }
  }
  return -1;
}

Mesh build_rectangle_mesh(int nx, int ny, double width, double height)
{
  OSM_REQUIRE(nx >= 1 && ny >= 1, ErrorCode::invalid_argument, "cell counts must be >= 1");
  OSM_REQUIRE(width > 0.0 && height > 0.0, ErrorCode::invalid_argument,
              "rectangle extent must be positive");
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
  {
    for (int i = 0; i <= nx; ++i)
    {
      vertices.emplace_back(width * i / nx, height * j / ny);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  const double tol = 1e-12 * std::max(width, height);
  // The vertex list is moved into the mesh, so the tagger keeps its own copy.
  auto tagger = [coords = vertices, width, height, tol](int a, int b) {
    const Point &p = coords[a];
    const Point &q = coords[b];
    if (std::abs(p.x()) < tol && std::abs(q.x()) < tol)
    {
      return BoundaryTag::left;
    }
    if (std::abs(p.x() - width) < tol && std::abs(q.x() - width) < tol)
    {
      return BoundaryTag::right;
    }
    if (std::abs(p.y()) < tol && std::abs(q.y()) < tol)
    {
      return BoundaryTag::bottom;
    }
    if (std::abs(p.y() - height) < tol && std::abs(q.y() - height) < tol)
    {
      return BoundaryTag::top;
    }
    return BoundaryTag::interior;
  };
  return Mesh(std::move(vertices), std::move(cells), tagger);
}

Refinement refine_uniform(const Mesh &coarse)
{
  const int nv = coarse.num_vertices();
  const int ne = coarse.num_edges();
  const int nc = coarse.num_cells();

  std::vector<Point> vertices;
  vertices.reserve(nv + ne);
  for (int v = 0; v < nv; ++v)
  {
    vertices.push_back(coarse.vertex(v));
  }
  for (int e = 0; e < ne; ++e)
  {
    const auto &[a, b] = coarse.edge(e);
    vertices.push_back(0.5 * (coarse.vertex(a) + coarse.vertex(b)));
  }

  std::vector<std::array<int, 3>> cells;
  cells.reserve(4 * static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c)
  {
    const auto &v = coarse.cell(c);
    const auto &e = coarse.cell_edges(c);
    const int m0 = nv + e[0];
    const int m1 = nv + e[1];
    const int m2 = nv + e[2];
    cells.push_back({v[0], m2, m1});
    cells.push_back({m2, v[1], m0});
    cells.push_back({m1, m0, v[2]});
    cells.push_back({m0, m1, m2});
  }

  auto tagger = [&coarse, nv](int a, int b) {
    // A fine boundary edge joins a coarse vertex to the midpoint of a coarse boundary edge.
    const int mid = std::max(a, b);
    return mid >= nv ? coarse.edge_tag(mid - nv) : BoundaryTag::interior;
  };

  Refinement out{Mesh(std::move(vertices), std::move(cells), tagger), RefinementMap{}};
  const Mesh &fine = out.mesh;
  RefinementMap &map = out.map;
  map.coarse_vertices = nv;
  map.cell_parent.resize(fine.num_cells());
  for (int c = 0; c < fine.num_cells(); ++c)
  {
    map.cell_parent[c] = c / 4;
  }
  map.edge_parent.assign(fine.num_edges(), -1);
  map.edge_parent_is_cell.assign(fine.num_edges(), false);
  map.edge_children.assign(ne, {-1, -1});
  for (int f = 0; f < fine.num_edges(); ++f)
  {
    const auto &[a, b] = fine.edge(f);
    if (a < nv)
    {
      // lo is a coarse vertex, hi the midpoint of the parent edge.
      const int pe = b - nv;
      map.edge_parent[f] = pe;
      map.edge_children[pe][coarse.edge(pe)[0] == a ? 0 : 1] = f;
    }
    else
    {
      // Both endpoints are midpoints: interior to the fine cell's parent.
      map.edge_parent[f] = map.cell_parent[fine.edge_cells(f)[0]];
      map.edge_parent_is_cell[f] = true;
    }
  }
  return out;
}

MeshHierarchy::MeshHierarchy(Mesh coarse, int refinements)
{
  OSM_REQUIRE(refinements >= 0, ErrorCode::invalid_argument, "negative refinement count");
  levels_.push_back(std::make_shared<const Mesh>(std::move(coarse)));
  for (int l = 0; l < refinements; ++l)
  {
    auto r = refine_uniform(*levels_.back());
    maps_.push_back(std::move(r.map));
    levels_.push_back(std::make_shared<const Mesh>(std::move(r.mesh)));
  }
}

void write_mesh(std::ostream &os, const Mesh &mesh)
{
  os.precision(17);
  os << "vertices " << mesh.num_vertices() << "\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
  {
    os << mesh.vertex(v).x() << " " << mesh.vertex(v).y() << "\n";
  }
  os << "cells " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const auto &cell = mesh.cell(c);
    os << cell[0] << " " << cell[1] << " " << cell[2] << "\n";
  }
  int nb = 0;
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    nb += mesh.is_boundary_edge(e) ? 1 : 0;
  }
  os << "boundary_edges " << nb << "\n";
  for (int e = 0; e < mesh.num_edges(); ++e)
  {
    if (mesh.is_boundary_edge(e))
    {
      os << mesh.edge(e)[0] << " " << mesh.edge(e)[1] << " " << to_string(mesh.edge_tag(e))
         << "\n";
    }
  }
}

}  // namespace osm
