#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "osm/elements/layout.hpp"
#include "osm/error.hpp"
#include "osm/meshkit/mesh.hpp"
#include "osm/meshkit/patches.hpp"

namespace
{

using namespace osm;

std::shared_ptr<const Mesh> square(int n)
{
  return std::make_shared<const Mesh>(build_rectangle_mesh(n, n));
}

int interior_vertex(const Mesh &m)
{
  for (int v = 0; v < m.num_vertices(); ++v)
  {
    const Point &p = m.vertex(v);
    if (p.x() > 1e-12 && p.x() < 1 - 1e-12 && p.y() > 1e-12 && p.y() < 1 - 1e-12)
    {
      return v;
    }
  }
  return -1;
}

TEST(Mesh, TwoByTwoCounts)
{
  const Mesh m = build_rectangle_mesh(2, 2);
  EXPECT_EQ(m.num_cells(), 8);
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_edges(), 16);
  EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_cells(), 1);
}

TEST(Mesh, SingleQuadCounts)
{
  const Mesh m = build_rectangle_mesh(1, 1);
  EXPECT_EQ(m.num_cells(), 2);
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_edges(), 5);
}

TEST(Mesh, CellsAreCounterclockwiseAndTileTheDomain)
{
  const Mesh m = build_rectangle_mesh(3, 2, 2.0, 0.5);
  for (int c = 0; c < m.num_cells(); ++c)
  {
    EXPECT_GT(m.geometry(c).det, 0.0);
  }
  EXPECT_NEAR(m.total_area(), 1.0, 1e-14);
}

TEST(Mesh, BoundaryTagsAndNormals)
{
  const Mesh m = build_rectangle_mesh(2, 2);
  int boundary = 0;
  for (int e = 0; e < m.num_edges(); ++e)
  {
    if (!m.is_boundary_edge(e))
    {
      EXPECT_EQ(m.edge_tag(e), BoundaryTag::interior);
      continue;
    }
    ++boundary;
    const Point n = m.outward_normal(e);
    switch (m.edge_tag(e))
    {
      case BoundaryTag::left:
        EXPECT_NEAR(n.x(), -1.0, 1e-14);
        break;
      case BoundaryTag::right:
        EXPECT_NEAR(n.x(), 1.0, 1e-14);
        break;
      case BoundaryTag::bottom:
        EXPECT_NEAR(n.y(), -1.0, 1e-14);
        break;
      case BoundaryTag::top:
        EXPECT_NEAR(n.y(), 1.0, 1e-14);
        break;
      default:
        ADD_FAILURE() << "untagged boundary edge";
    }
  }
  EXPECT_EQ(boundary, 8);
}

TEST(Mesh, ParseBoundaryTag)
{
  EXPECT_EQ(parse_boundary_tag("top"), BoundaryTag::top);
  EXPECT_THROW(parse_boundary_tag("front"), Error);
}

TEST(Refinement, CellCountsQuadruple)
{
  const Mesh two = build_rectangle_mesh(1, 1);
  EXPECT_EQ(refine_uniform(two).mesh.num_cells(), 8);
  const MeshHierarchy h(build_rectangle_mesh(2, 2), 2);
  EXPECT_EQ(h.num_levels(), 3);
  EXPECT_EQ(h.finest().num_cells(), 128);
}

TEST(Refinement, ChildrenAreQuarterAreaAndInsideParent)
{
  const Mesh coarse = build_rectangle_mesh(2, 2);
  const Refinement r = refine_uniform(coarse);
  for (int c = 0; c < r.mesh.num_cells(); ++c)
  {
    const int parent = r.map.cell_parent[c];
    EXPECT_EQ(parent, c / 4);
    EXPECT_NEAR(r.mesh.geometry(c).area(), coarse.geometry(parent).area() / 4.0, 1e-15);
    Point centroid = Point::Zero();
    for (int v : r.mesh.cell(c))
    {
      centroid += r.mesh.vertex(v) / 3.0;
    }
    const Point xhat = coarse.geometry(parent).pullback(centroid);
    EXPECT_GT(xhat.x(), 0.0);
    EXPECT_GT(xhat.y(), 0.0);
    EXPECT_LT(xhat.x() + xhat.y(), 1.0);
  }
}

TEST(Refinement, EdgeChildrenSplitParentEdge)
{
  const Mesh coarse = build_rectangle_mesh(2, 2);
  const Refinement r = refine_uniform(coarse);
  for (int e = 0; e < coarse.num_edges(); ++e)
  {
    const auto [lo, hi] = coarse.edge(e);
    const int mid = r.map.coarse_vertices + e;
    EXPECT_TRUE((r.mesh.vertex(mid) - 0.5 * (coarse.vertex(lo) + coarse.vertex(hi))).norm() < 1e-15);
    const auto halves = r.map.edge_children[e];
    EXPECT_EQ(r.mesh.find_edge(lo, mid), halves[0]);
    EXPECT_EQ(r.mesh.find_edge(mid, hi), halves[1]);
    EXPECT_EQ(r.mesh.edge_tag(halves[0]), coarse.edge_tag(e));
  }
}

TEST(Mesh, WriteMeshListsEntities)
{
  std::ostringstream os;
  write_mesh(os, build_rectangle_mesh(1, 1));
  EXPECT_NE(os.str().find("vertices 4"), std::string::npos);
}

TEST(Patches, InteriorStarOfRt1)
{
  const auto mesh = square(2);
  const FieldLayout layout(mesh, 1, 1, {});
  const int v = interior_vertex(*mesh);
  ASSERT_GE(v, 0);
  ASSERT_EQ(mesh->vertex_edges(v).size(), 6u);
  const PatchSet ps = vertex_star_patches(*mesh, layout, 0);
  EXPECT_EQ(ps.patches[v].dofs.size(), 6u);
}

TEST(Patches, CornerStarExcludesEssentialUnknowns)
{
  const auto mesh = square(2);
  const std::vector<BoundaryTag> all{BoundaryTag::left, BoundaryTag::right, BoundaryTag::bottom,
                                     BoundaryTag::top};
  const FieldLayout layout(mesh, 1, 1, {all});
  const PatchSet ps = vertex_star_patches(*mesh, layout, 0);
  for (const Patch &p : ps.patches)
  {
    for (int d : p.dofs)
    {
      EXPECT_FALSE(layout.essential(0)[d]);
    }
  }
  // Corner (0,0) touches two boundary edges and one interior diagonal.
  EXPECT_EQ(ps.patches[0].dofs.size(), 1u);
}

TEST(Patches, StarsCoverFreeUnknowns)
{
  const auto mesh = square(2);
  for (int k = 1; k <= 3; ++k)
  {
    const FieldLayout layout(mesh, 2, k, {{BoundaryTag::top}, {}});
    for (int field = 0; field < 2; ++field)
    {
      std::set<int> covered;
      for (const Patch &p : vertex_star_patches(*mesh, layout, field).patches)
      {
        covered.insert(p.dofs.begin(), p.dofs.end());
      }
      int free = 0;
      for (int d = 0; d < layout.rt_size(); ++d)
      {
        if (!layout.essential(field)[d])
        {
          ++free;
          EXPECT_TRUE(covered.count(layout.flux_offset(field) + d));
        }
      }
      EXPECT_EQ(static_cast<int>(covered.size()), free);
    }
  }
}

TEST(Patches, StarRejectsPotentialField)
{
  const auto mesh = square(1);
  const FieldLayout layout(mesh, 2, 1, {});
  EXPECT_THROW(vertex_star_patches(*mesh, layout, 2), Error);
}

TEST(Patches, VankaSizeAtInteriorVertex)
{
  const auto mesh = square(2);
  const FieldLayout layout(mesh, 4, 1, {});
  const int v = interior_vertex(*mesh);
  const PatchSet vanka = vertex_vanka_patches(*mesh, layout, VankaExtent::star);
  EXPECT_EQ(vanka.patches[v].dofs.size(), 48u);
  EXPECT_EQ(vanka.size(), mesh->num_vertices());
}

TEST(Patches, VankaContainsStars)
{
  const auto mesh = square(2);
  const FieldLayout layout(mesh, 3, 2, {{BoundaryTag::left}, {}, {}});
  const PatchSet vanka = vertex_vanka_patches(*mesh, layout);
  for (int field = 0; field < 3; ++field)
  {
    const PatchSet star = vertex_star_patches(*mesh, layout, field);
    for (int v = 0; v < mesh->num_vertices(); ++v)
    {
      const auto &big = vanka.patches[v].dofs;
      for (int d : star.patches[v].dofs)
      {
        EXPECT_TRUE(std::binary_search(big.begin(), big.end(), d));
      }
    }
  }
}

}  // namespace
