#pragma once

#include <vector>

#include <Eigen/Dense>

#include "osm/krylov/gmres.hpp"
#include "osm/meshkit/patches.hpp"

namespace osm
{

enum class PatchPrecision
{
  float64,
  /// Factors stored in single precision; halves the memory of large (Vanka) patch sets.
  float32,
};

/// Additive Schwarz over a patch set: z = damping * sum_p R_p^T A_p^{-1} R_p r.
/// Patch matrices are gathered from the global matrix and factorised densely at setup.
class PatchSolver final : public LinearOperator
{
public:
  PatchSolver(const SparseMatrix &a, const PatchSet &patches, double damping = 1.0,
              PatchPrecision precision = PatchPrecision::float64);

  int size() const override { return n_; }
  void apply(const Vector &r, Vector &z) const override;

  /// Single patch solve: local correction for residual r restricted to patch p.
  Vector solve_patch(int p, const Vector &r) const;
  const std::vector<int> &patch_dofs(int p) const { return dofs_[p]; }
  int num_patches() const { return static_cast<int>(dofs_.size()); }
  double damping() const { return damping_; }
  PatchPrecision precision() const { return precision_; }
  std::size_t stored_entries() const;

private:
  int n_;
  double damping_;
  std::vector<std::vector<int>> dofs_;
  PatchPrecision precision_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXf>> lu_single_;
};

/// Dense solve of one patch of a global system (gather, solve, return local correction).
Vector patch_solve(const SparseMatrix &a, const Patch &patch, const Vector &r);

}  // namespace osm
