#pragma once

#include <cstdint>
#include <memory>

#include "osm/krylov/gmres.hpp"
#include "osm/krylov/patch_solver.hpp"

namespace osm
{

/// `sweeps` passes of additive Schwarz from a zero initial guess:
/// x <- x + damping * sum_p R_p^T A_p^{-1} R_p (r - A x).
Vector apply_star_smoother(const SparseMatrix &a, const PatchSolver &patches, const Vector &r,
                           int sweeps);

/// Largest eigenvalue magnitude of P A by power iteration from a fixed pseudo-random start.
/// Rows in `skip` are zeroed in the start vector.
double estimate_lambda_max(const SparseMatrix &a, const LinearOperator &p, int iterations,
                           const std::vector<bool> &skip = {}, std::uint64_t seed = 0x5eed);

/// One step of damped Richardson x = omega P r (a single Chebyshev iteration).
/// omega = scale / lambda_max(P A), estimated once at construction.
class RichardsonSmoother final : public LinearOperator
{
public:
  RichardsonSmoother(const SparseMatrix &a, std::shared_ptr<const LinearOperator> inner,
                     double scale = 0.8, int power_iterations = 10,
                     const std::vector<bool> &skip = {});

  int size() const override { return inner_->size(); }
  void apply(const Vector &r, Vector &z) const override;

  double omega() const { return omega_; }
  double lambda_max() const { return lambda_max_; }

private:
  std::shared_ptr<const LinearOperator> inner_;
  double lambda_max_;
  double omega_;
};

/// Block-diagonal relaxation of the monolithic (flux, potential) system: every species'
/// flux block is relaxed by a patch solver; its potential block is multiplied by
/// schur_sign * kappa_i / mass_p.
class BlockDiagonalSmoother final : public LinearOperator
{
public:
  struct Block
  {
    std::vector<int> flux;
    std::vector<int> potential;
    std::shared_ptr<const LinearOperator> flux_solver;
    /// Applied entrywise to the potential residual.
    Vector potential_scale;
  };

  BlockDiagonalSmoother(int size, std::vector<Block> blocks);

  int size() const override { return n_; }
  void apply(const Vector &r, Vector &z) const override;

private:
  int n_;
  std::vector<Block> blocks_;
};

}  // namespace osm
