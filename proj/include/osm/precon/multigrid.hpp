#pragma once

#include <memory>
#include <vector>

#include "osm/assembly/assembly.hpp"
#include "osm/elements/transfer.hpp"
#include "osm/krylov/direct.hpp"
#include "osm/krylov/gmres.hpp"
#include "osm/krylov/patch_solver.hpp"

namespace osm
{

/// One level of a multigrid hierarchy; level 0 is the coarsest.
struct GmgLevel
{
  SparseMatrix matrix;
  /// Unknowns with identity rows (passed through by the cycle).
  std::vector<bool> essential;
  /// Maps a residual to a correction; unused on level 0.
  std::shared_ptr<const LinearOperator> smoother;
  /// From level l-1 to this level (fine x coarse); empty on level 0.
  SparseMatrix prolongation;
  /// Short description for reports.
  std::string smoother_name;
};

/// V(pre, post) cycle from a zero initial guess with a direct solve on level 0.
class GmgCycle final : public LinearOperator
{
public:
  GmgCycle(std::vector<GmgLevel> levels, int pre_smooth = 1, int post_smooth = 1);

  int size() const override { return static_cast<int>(levels_.back().matrix.rows()); }
  void apply(const Vector &r, Vector &z) const override;

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const GmgLevel &level(int l) const { return levels_[l]; }
  int pre_smooth() const { return pre_; }
  int post_smooth() const { return post_; }

private:
  Vector cycle(int l, const Vector &b) const;

  std::vector<GmgLevel> levels_;
  int pre_;
  int post_;
  std::shared_ptr<LuFactorization> coarse_;
};

struct FluxGmgOptions
{
  double star_damping = 0.5;
  int pre_smooth = 1;
  int post_smooth = 1;
};

/// GMG for one species' flux block A_i + kappa_i B_i^T Mp_i^{-1} B_i.
/// `blocks[l]` is the block on level l (essential rows eliminated), `prolongations[l]`
/// maps level l fluxes to level l+1, `layouts[l]` gives the patches.
GmgCycle build_flux_block_gmg(const std::vector<const FieldLayout *> &layouts, int species,
                              const std::vector<SparseMatrix> &blocks,
                              const std::vector<SparseMatrix> &prolongations,
                              const FluxGmgOptions &options = {});

enum class SmootherKind
{
  al,
  vanka,
};

struct MonolithicOptions
{
  SmootherKind smoother = SmootherKind::al;
  /// Star sweep damping under the Richardson wrapper.
  double star_damping = 1.0;
  double vanka_damping = 1.0;
  /// omega = scale / lambda_max with lambda_max from `power_iterations` steps.
  double chebyshev_scale = 0.8;
  int power_iterations = 10;
  /// Sign of the potential block in the AL smoother (-1 applies -kappa Mp^{-1}).
  double schur_sign = -1.0;
  VankaExtent vanka_extent = VankaExtent::closure;
  /// Vanka patch sets whose dense storage exceeds this many entries are kept in single precision.
  std::size_t vanka_double_limit = 100'000'000;
  int pre_smooth = 1;
  int post_smooth = 1;
};

/// Monolithic GMG over per-level assembled systems. `transfers[l]` maps level l to l+1.
GmgCycle build_monolithic_gmg(const std::vector<const FieldLayout *> &layouts,
                              const std::vector<const BlockSystem *> &systems,
                              const std::vector<const LevelTransfer *> &transfers,
                              const MonolithicOptions &options = {});

/// Smoother descriptor for reports, e.g. "richardson(al-star)".
std::string describe(const MonolithicOptions &options);

}  // namespace osm
