#include "osm/precon/multigrid.hpp"

#include "osm/error.hpp"
#include "osm/meshkit/patches.hpp"
#include "osm/precon/relaxation.hpp"

namespace osm
{

namespace
{

void mask(Vector &v, const std::vector<bool> &essential)
{
  for (std::size_t i = 0; i < essential.size(); ++i)
  {
    if (essential[i])
    {
      v[i] = 0.0;
    }
  }
}

}  // namespace

GmgCycle::GmgCycle(std::vector<GmgLevel> levels, int pre_smooth, int post_smooth)
  : levels_(std::move(levels)), pre_(pre_smooth), post_(post_smooth)
{
  OSM_REQUIRE(!levels_.empty(), ErrorCode::invalid_argument, "multigrid needs at least one level");
  OSM_REQUIRE(pre_ >= 0 && post_ >= 0, ErrorCode::invalid_argument, "negative smoothing count");
  for (int l = 0; l < num_levels(); ++l)
  {
    const GmgLevel &lv = levels_[l];
    const auto n = lv.matrix.rows();
    OSM_REQUIRE(lv.matrix.cols() == n, ErrorCode::invalid_argument, "level matrix not square");
    OSM_REQUIRE(lv.essential.empty() || static_cast<Eigen::Index>(lv.essential.size()) == n,
                ErrorCode::level_mismatch, "essential mask size differs from level matrix");
    if (l == 0)
    {
      continue;
    }
    OSM_REQUIRE(lv.smoother && lv.smoother->size() == n, ErrorCode::level_mismatch,
                "smoother size differs from level matrix on level " + std::to_string(l));
    OSM_REQUIRE(lv.prolongation.rows() == n && lv.prolongation.cols() == levels_[l - 1].matrix.rows(),
                ErrorCode::level_mismatch, "prolongation does not match levels " +
                                               std::to_string(l - 1) + " and " + std::to_string(l));
  }
  coarse_ = std::make_shared<LuFactorization>(levels_.front().matrix);
}

Vector GmgCycle::cycle(int l, const Vector &b) const
{
  if (l == 0)
  {
    return coarse_->solve(b);
  }
  const GmgLevel &lv = levels_[l];
  // Identity rows are decoupled from the rest after elimination.
  Vector x = Vector::Zero(b.size());
  for (std::size_t i = 0; i < lv.essential.size(); ++i)
  {
    if (lv.essential[i])
    {
      x[i] = b[i];
    }
  }
  Vector r = b;
  mask(r, lv.essential);
  Vector z(b.size());
  for (int s = 0; s < pre_; ++s)
  {
    lv.smoother->apply(r, z);
    x += z;
    r = b - lv.matrix * x;
  }
  if (pre_ == 0)
  {
    r = b - lv.matrix * x;
  }
  Vector rc = lv.prolongation.transpose() * r;
  mask(rc, levels_[l - 1].essential);
  Vector e = lv.prolongation * cycle(l - 1, rc);
  mask(e, lv.essential);
  x += e;
  for (int s = 0; s < post_; ++s)
  {
    r = b - lv.matrix * x;
    lv.smoother->apply(r, z);
    x += z;
  }
  return x;
}

void GmgCycle::apply(const Vector &r, Vector &z) const
{
  OSM_REQUIRE(r.size() == size(), ErrorCode::invalid_argument, "residual size mismatch");
  z = cycle(num_levels() - 1, r);
}

GmgCycle build_flux_block_gmg(const std::vector<const FieldLayout *> &layouts, int species,
                              const std::vector<SparseMatrix> &blocks,
                              const std::vector<SparseMatrix> &prolongations,
                              const FluxGmgOptions &options)
{
  const std::size_t nl = layouts.size();
  OSM_REQUIRE(nl >= 1 && blocks.size() == nl, ErrorCode::level_mismatch,
              "one flux block per level required");
  OSM_REQUIRE(prolongations.size() + 1 == nl, ErrorCode::level_mismatch,
              "one prolongation per level pair required");
  std::vector<GmgLevel> levels(nl);
  for (std::size_t l = 0; l < nl; ++l)
  {
    const FieldLayout &layout = *layouts[l];
    OSM_REQUIRE(blocks[l].rows() == layout.rt_size(), ErrorCode::level_mismatch,
                "flux block size differs from layout on level " + std::to_string(l));
    GmgLevel &lv = levels[l];
    lv.matrix = blocks[l];
    lv.essential = layout.essential(species);
    if (l == 0)
    {
      continue;
    }
    lv.prolongation = prolongations[l - 1];
    const PatchSet patches = vertex_star_patches(layout.mesh(), layout, species, true);
    auto asm_solver = std::make_shared<PatchSolver>(lv.matrix, patches, options.star_damping);
    lv.smoother = asm_solver;
    lv.smoother_name = "star-asm";
  }
  return GmgCycle(std::move(levels), options.pre_smooth, options.post_smooth);
}

std::string describe(const MonolithicOptions &options)
{
  return options.smoother == SmootherKind::al ? "richardson(al-star)" : "richardson(vanka)";
}

GmgCycle build_monolithic_gmg(const std::vector<const FieldLayout *> &layouts,
                              const std::vector<const BlockSystem *> &systems,
                              const std::vector<const LevelTransfer *> &transfers,
                              const MonolithicOptions &options)
{
  const std::size_t nl = layouts.size();
  OSM_REQUIRE(nl >= 1 && systems.size() == nl, ErrorCode::level_mismatch,
              "one system per level required");
  OSM_REQUIRE(transfers.size() + 1 >= nl, ErrorCode::level_mismatch, "missing transfers");
  std::vector<GmgLevel> levels(nl);
  for (std::size_t l = 0; l < nl; ++l)
  {
    const FieldLayout &layout = *layouts[l];
    const BlockSystem &sys = *systems[l];
    OSM_REQUIRE(sys.matrix.rows() == layout.size(), ErrorCode::level_mismatch,
                "system size differs from layout on level " + std::to_string(l));
    GmgLevel &lv = levels[l];
    lv.matrix = sys.matrix;
    lv.essential = sys.essential;
    if (l == 0)
    {
      continue;
    }
    const LevelTransfer &t = *transfers[l - 1];
    OSM_REQUIRE(t.prolongation.rows() == layout.size() &&
                    t.prolongation.cols() == layouts[l - 1]->size(),
                ErrorCode::level_mismatch, "transfer does not match levels");
    lv.prolongation = t.prolongation;

    std::shared_ptr<const LinearOperator> inner;
    if (options.smoother == SmootherKind::al)
    {
      OSM_REQUIRE(sys.kappa.size() == layout.species() && (sys.kappa.array() > 0.0).all(),
                  ErrorCode::invalid_argument, "AL smoother needs an augmented system");
      std::vector<BlockDiagonalSmoother::Block> blocks;
      for (int i = 0; i < layout.species(); ++i)
      {
        BlockDiagonalSmoother::Block b;
        b.flux = flux_indices(layout, i);
        b.potential = potential_indices(layout, i);
        const SparseMatrix fb = sparse_submatrix(sys.matrix, b.flux, b.flux);
        const PatchSet patches = vertex_star_patches(layout.mesh(), layout, i, true);
        b.flux_solver = std::make_shared<PatchSolver>(fb, patches, options.star_damping);
        b.potential_scale = options.schur_sign * sys.kappa[i] *
                            sys.mass_p.segment(i * layout.dg_size(), layout.dg_size()).cwiseInverse();
        blocks.push_back(std::move(b));
      }
      inner = std::make_shared<BlockDiagonalSmoother>(layout.size(), std::move(blocks));
    }
    else
    {
      const PatchSet patches = vertex_vanka_patches(layout.mesh(), layout, options.vanka_extent);
      std::size_t entries = 0;
      for (const Patch &p : patches.patches)
      {
        entries += p.dofs.size() * p.dofs.size();
      }
      const PatchPrecision precision = entries > options.vanka_double_limit
                                           ? PatchPrecision::float32
                                           : PatchPrecision::float64;
      inner = std::make_shared<PatchSolver>(sys.matrix, patches, options.vanka_damping, precision);
    }
    lv.smoother = std::make_shared<RichardsonSmoother>(sys.matrix, inner, options.chebyshev_scale,
                                                       options.power_iterations, sys.essential);
    lv.smoother_name = describe(options);
  }
  return GmgCycle(std::move(levels), options.pre_smooth, options.post_smooth);
}

}  // namespace osm
