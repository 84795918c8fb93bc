#include "osm/elements/layout.hpp"

#include <algorithm>

#include "osm/error.hpp"

namespace osm
{

FieldLayout::FieldLayout(std::shared_ptr<const Mesh> mesh, int n_species, int k,
                         std::vector<std::vector<BoundaryTag>> neumann_tags)
  : mesh_(std::move(mesh)),
    n_(n_species),
    k_(k),
    rt_(ReferenceElement::raviart_thomas(k)),
    dg_(ReferenceElement::discontinuous(k - 1)),
    neumann_tags_(std::move(neumann_tags))
{
  OSM_REQUIRE(mesh_ != nullptr, ErrorCode::invalid_argument, "layout needs a mesh");
  OSM_REQUIRE(n_ >= 1, ErrorCode::invalid_argument, "need at least one species");
  if (neumann_tags_.empty())
  {
    neumann_tags_.resize(n_);
  }
  OSM_REQUIRE(static_cast<int>(neumann_tags_.size()) == n_, ErrorCode::invalid_argument,
              "one Neumann tag set per species required");
  for (const auto &tags : neumann_tags_)
  {
    for (BoundaryTag t : tags)
    {
      OSM_REQUIRE(t != BoundaryTag::interior, ErrorCode::invalid_argument,
                  "interior is not a boundary tag");
    }
  }

  const Mesh &m = *mesh_;
  const int nrt = rt_.dimension();
  const int nint = rt_.dofs_per_cell_interior();
  rt_size_ = m.num_edges() * k_ + m.num_cells() * nint;
  dg_size_ = m.num_cells() * dg_.dimension();

  rt_cell_dofs_.resize(static_cast<std::size_t>(m.num_cells()) * nrt);
  rt_cell_signs_.resize(rt_cell_dofs_.size());
  for (int c = 0; c < m.num_cells(); ++c)
  {
    int l = 0;
    const std::size_t base = static_cast<std::size_t>(c) * nrt;
    for (int e = 0; e < 3; ++e)
    {
      const int ge = m.cell_edges(c)[e];
      const bool agrees = m.edge_sign(c, e) > 0;
      for (int j = 0; j < k_; ++j, ++l)
      {
        rt_cell_dofs_[base + l] = rt_edge_dof(ge, j);
        // Reversal flips the normal and maps P_j(s) to (-1)^j P_j(s).
        rt_cell_signs_[base + l] = agrees ? 1.0 : (j % 2 == 0 ? -1.0 : 1.0);
      }
    }
    for (int q = 0; q < nint; ++q, ++l)
    {
      rt_cell_dofs_[base + l] = rt_interior_dof(c, q);
      rt_cell_signs_[base + l] = 1.0;
    }
  }

  essential_.assign(n_, std::vector<bool>(rt_size_, false));
  for (int i = 0; i < n_; ++i)
  {
    for (int e = 0; e < m.num_edges(); ++e)
    {
      if (m.is_boundary_edge(e) && is_neumann(i, m.edge_tag(e)))
      {
        for (int j = 0; j < k_; ++j)
        {
          essential_[i][rt_edge_dof(e, j)] = true;
        }
      }
    }
  }

  rule_ = triangle_rule(2 * k_ + 2);
  rt_table_ = rt_.tabulate(rule_.points);
  dg_table_ = dg_.tabulate(rule_.points);
}

bool FieldLayout::is_neumann(int species, BoundaryTag tag) const
{
  const auto &tags = neumann_tags_[species];
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

int FieldLayout::field_offset(int field) const
{
  OSM_REQUIRE(field >= 0 && field < num_fields(), ErrorCode::invalid_argument,
              "unknown field id " + std::to_string(field));
  return field < n_ ? flux_offset(field) : potential_offset(field - n_);
}

int FieldLayout::field_size(int field) const
{
  OSM_REQUIRE(field >= 0 && field < num_fields(), ErrorCode::invalid_argument,
              "unknown field id " + std::to_string(field));
  return field < n_ ? rt_size_ : dg_size_;
}

std::vector<bool> FieldLayout::essential_mask() const
{
  std::vector<bool> mask(size(), false);
  for (int i = 0; i < n_; ++i)
  {
    for (int d = 0; d < rt_size_; ++d)
    {
      mask[flux_offset(i) + d] = essential_[i][d];
    }
  }
  return mask;
}

int FieldLayout::num_essential() const
{
  int count = 0;
  for (const auto &e : essential_)
  {
    count += static_cast<int>(std::count(e.begin(), e.end(), true));
  }
  return count;
}

FieldLayout build_layout(std::shared_ptr<const Mesh> mesh, int n_species, int k,
                         const std::vector<std::vector<std::string>> &neumann_tags)
{
  std::vector<std::vector<BoundaryTag>> tags(n_species);
  if (!neumann_tags.empty())
  {
    OSM_REQUIRE(static_cast<int>(neumann_tags.size()) == n_species, ErrorCode::invalid_argument,
                "one Neumann tag set per species required");
    for (int i = 0; i < n_species; ++i)
    {
      for (const auto &name : neumann_tags[i])
      {
        tags[i].push_back(parse_boundary_tag(name));
      }
    }
  }
  return FieldLayout(std::move(mesh), n_species, k, std::move(tags));
}

}  // namespace osm
