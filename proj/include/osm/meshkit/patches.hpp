#pragma once

#include <vector>

#include "osm/elements/layout.hpp"

namespace osm
{

enum class PatchKind
{
  vertex_star,
  vertex_vanka,
};

/// Entities gathered around a vertex for Vanka patches: `closure` takes every edge of the
/// incident cells, `star` only the edges incident to the vertex.
enum class VankaExtent
{
  closure,
  star,
};

struct Patch
{
  int vertex = -1;
  /// Sorted unknown indices.
  std::vector<int> dofs;
};

struct PatchSet
{
  PatchKind kind = PatchKind::vertex_star;
  int level = 0;
  std::vector<Patch> patches;

  int size() const { return static_cast<int>(patches.size()); }
  std::size_t max_patch_size() const;
};

/// One patch per vertex with the free unknowns of one flux field on incident edges and
/// incident cell interiors. Indices are monolithic unless `field_local` is set, in which
/// case they index the field on its own.
PatchSet vertex_star_patches(const Mesh &mesh, const FieldLayout &layout, int field,
                             bool field_local = false);

/// One patch per vertex with the free unknowns of all fields around the vertex.
PatchSet vertex_vanka_patches(const Mesh &mesh, const FieldLayout &layout,
                              VankaExtent extent = VankaExtent::closure);

}  // namespace osm
