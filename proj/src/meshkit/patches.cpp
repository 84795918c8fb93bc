#include "osm/meshkit/patches.hpp"

#include <algorithm>

#include "osm/error.hpp"

namespace osm
{

namespace
{

void require_same_mesh(const Mesh &mesh, const FieldLayout &layout)
{
  OSM_REQUIRE(&mesh == &layout.mesh(), ErrorCode::invalid_argument,
              "layout was built on a different mesh");
}

void sort_unique(std::vector<int> &v)
{
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Free flux unknowns of `species` on the given edges and on the interiors of `cells`.
void add_flux(const FieldLayout &layout, int species, std::span<const int> edges,
              std::span<const int> cells, int offset, std::vector<int> &out)
{
  const auto &ess = layout.essential(species);
  const int k = layout.degree();
  for (int e : edges)
  {
    for (int j = 0; j < k; ++j)
    {
      const int d = layout.rt_edge_dof(e, j);
      if (!ess[d])
      {
        out.push_back(offset + d);
      }
    }
  }
  const int nint = layout.rt().dofs_per_cell_interior();
  for (int c : cells)
  {
    for (int q = 0; q < nint; ++q)
    {
      out.push_back(offset + layout.rt_interior_dof(c, q));
    }
  }
}

}  // namespace

std::size_t PatchSet::max_patch_size() const
{
  std::size_t m = 0;
  for (const auto &p : patches)
  {
    m = std::max(m, p.dofs.size());
  }
  return m;
}

PatchSet vertex_star_patches(const Mesh &mesh, const FieldLayout &layout, int field, bool field_local)
{
  require_same_mesh(mesh, layout);
  OSM_REQUIRE(layout.is_flux_field(field), ErrorCode::invalid_argument,
              "field " + std::to_string(field) + " is not a flux field");
  PatchSet set;
  set.kind = PatchKind::vertex_star;
  set.patches.resize(mesh.num_vertices());
  const int offset = field_local ? 0 : layout.flux_offset(field);
  for (int v = 0; v < mesh.num_vertices(); ++v)
  {
    Patch &p = set.patches[v];
    p.vertex = v;
    add_flux(layout, field, mesh.vertex_edges(v), mesh.vertex_cells(v), offset, p.dofs);
    sort_unique(p.dofs);
  }
  return set;
}

PatchSet vertex_vanka_patches(const Mesh &mesh, const FieldLayout &layout, VankaExtent extent)
{
  require_same_mesh(mesh, layout);
  PatchSet set;
  set.kind = PatchKind::vertex_vanka;
  set.patches.resize(mesh.num_vertices());
  const int nd = layout.dg().dimension();
  std::vector<int> edges;
  for (int v = 0; v < mesh.num_vertices(); ++v)
  {
    Patch &p = set.patches[v];
    p.vertex = v;
    const auto cells = mesh.vertex_cells(v);
    edges.assign(mesh.vertex_edges(v).begin(), mesh.vertex_edges(v).end());
    if (extent == VankaExtent::closure)
    {
      for (int c : cells)
      {
        const auto &ce = mesh.cell_edges(c);
        edges.insert(edges.end(), ce.begin(), ce.end());
      }
      sort_unique(edges);
    }
    for (int i = 0; i < layout.species(); ++i)
    {
      add_flux(layout, i, edges, cells, layout.flux_offset(i), p.dofs);
      for (int c : cells)
      {
        for (int q = 0; q < nd; ++q)
        {
          p.dofs.push_back(layout.potential_offset(i) + layout.dg_dof(c, q));
        }
      }
    }
    sort_unique(p.dofs);
  }
  return set;
}

}  // namespace osm
