#pragma once

#include <memory>
#include <vector>

#include "osm/elements/layout.hpp"
#include "osm/elements/transfer.hpp"
#include "osm/osmcore/problems.hpp"

namespace osm
{

/// Mesh hierarchy of a problem refined m times, one layout per level and the transfers
/// between consecutive levels.
struct Discretization
{
  std::shared_ptr<const MeshHierarchy> hierarchy;
  std::vector<std::shared_ptr<const FieldLayout>> layouts;
  /// transfers[l] maps level l to level l+1.
  std::vector<LevelTransfer> transfers;
  int refinements = 0;
  int degree = 1;

  int num_levels() const { return static_cast<int>(layouts.size()); }
  const FieldLayout &level(int l) const { return *layouts[l]; }
  const FieldLayout &fine() const { return *layouts.back(); }
  std::vector<const FieldLayout *> layout_pointers() const;
  std::vector<const LevelTransfer *> transfer_pointers() const;
  /// Fine state injected down to level l.
  Vector inject(const Vector &fine_state, int level) const;
};

/// `with_transfers` = false builds only the finest layout (direct solvers need nothing else).
Discretization build_discretization(const ProblemData &problem, int refinements, int k,
                                    bool with_transfers = true);

/// Potentials of the constant or varying composition c(x); fluxes zero except essential values.
Vector state_from_concentrations(const FieldLayout &layout, const ProblemData &problem,
                                 const std::function<Eigen::VectorXd(const Point &)> &c);

Vector picard_initial_state(const FieldLayout &layout, const ProblemData &problem);
/// Uniform composition from the problem's initial mole fractions at the problem pressure.
Vector newton_initial_state(const FieldLayout &layout, const ProblemData &problem);

/// Label of the mesh family written to experiment metadata.
inline constexpr const char *kMeshFamily = "rectangle-right-diagonal";

}  // namespace osm
