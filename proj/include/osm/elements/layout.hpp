#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "osm/elements/quadrature.hpp"
#include "osm/elements/reference_element.hpp"
#include "osm/meshkit/mesh.hpp"

namespace osm
{

/// Unknown numbering for (RT_k)^n x (DG_{k-1})^n on one mesh.
///
/// Fields 0..n-1 are the species fluxes, fields n..2n-1 the species potentials. Global
/// numbering is species-major: all of J_1, ..., all of J_n, then mu_1 ... mu_n. Within a
/// flux field edge unknowns come first (edge e, moment j -> e*k + j) followed by cell
/// interior unknowns; within a potential field unknown q of cell c is c*d + q.
class FieldLayout
{
public:
  FieldLayout(std::shared_ptr<const Mesh> mesh, int n_species, int k,
              std::vector<std::vector<BoundaryTag>> neumann_tags);

  const Mesh &mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int species() const { return n_; }
  int degree() const { return k_; }
  const ReferenceElement &rt() const { return rt_; }
  const ReferenceElement &dg() const { return dg_; }

  /// Per-species space sizes.
  int rt_size() const { return rt_size_; }
  int dg_size() const { return dg_size_; }
  int size() const { return n_ * (rt_size_ + dg_size_); }

  int num_fields() const { return 2 * n_; }
  bool is_flux_field(int field) const { return field >= 0 && field < n_; }
  int field_offset(int field) const;
  int field_size(int field) const;
  int flux_offset(int species) const { return species * rt_size_; }
  int potential_offset(int species) const { return n_ * rt_size_ + species * dg_size_; }

  int rt_edge_dof(int edge, int j) const { return edge * k_ + j; }
  int rt_interior_dof(int cell, int q) const
  {
    return mesh_->num_edges() * k_ + cell * rt_.dofs_per_cell_interior() + q;
  }
  int dg_dof(int cell, int q) const { return cell * dg_.dimension() + q; }

  /// Local-to-field RT unknowns of a cell (reference ordering) and their orientation signs.
  std::span<const int> rt_cell_dofs(int cell) const
  {
    const int n = rt_.dimension();
    return {rt_cell_dofs_.data() + static_cast<std::size_t>(cell) * n, static_cast<std::size_t>(n)};
  }
  std::span<const double> rt_cell_signs(int cell) const
  {
    const int n = rt_.dimension();
    return {rt_cell_signs_.data() + static_cast<std::size_t>(cell) * n, static_cast<std::size_t>(n)};
  }

  /// True where a flux unknown of `species` carries an essential (normal-flux) condition.
  const std::vector<bool> &essential(int species) const { return essential_[species]; }
  bool is_neumann(int species, BoundaryTag tag) const;
  const std::vector<BoundaryTag> &neumann_tags(int species) const { return neumann_tags_[species]; }
  /// Mask over the whole layout.
  std::vector<bool> essential_mask() const;
  int num_essential() const;

  /// Assembly rule of exactness 2k+2 and its tabulations.
  const TriangleRule &rule() const { return rule_; }
  const Tabulation &rt_table() const { return rt_table_; }
  const Tabulation &dg_table() const { return dg_table_; }

private:
  std::shared_ptr<const Mesh> mesh_;
  int n_;
  int k_;
  ReferenceElement rt_;
  ReferenceElement dg_;
  int rt_size_ = 0;
  int dg_size_ = 0;
  std::vector<int> rt_cell_dofs_;
  std::vector<double> rt_cell_signs_;
  std::vector<std::vector<BoundaryTag>> neumann_tags_;
  std::vector<std::vector<bool>> essential_;
  TriangleRule rule_;
  Tabulation rt_table_;
  Tabulation dg_table_;
};

/// Builds a layout; tag names are "left", "right", "bottom", "top".
FieldLayout build_layout(std::shared_ptr<const Mesh> mesh, int n_species, int k,
                         const std::vector<std::vector<std::string>> &neumann_tags);

}  // namespace osm
