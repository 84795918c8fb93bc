#pragma once

#include "osm/elements/layout.hpp"
#include "osm/krylov/sparse.hpp"

namespace osm
{

/// Grid transfer between two nested layouts (coarse level l, fine level l+1).
struct LevelTransfer
{
  SparseMatrix rt;  ///< one flux field, fine x coarse
  SparseMatrix dg;  ///< one potential field, fine x coarse
  SparseMatrix rt_inject;  ///< canonical coarse interpolation of fine fluxes, coarse x fine
  SparseMatrix dg_inject;  ///< L2 projection of fine potentials, coarse x fine
  SparseMatrix prolongation;  ///< all fields, block diagonal, fine x coarse
  SparseMatrix restriction;  ///< transpose of prolongation
  SparseMatrix injection;  ///< all fields, coarse x fine

  Vector prolong(const Vector &coarse) const { return prolongation * coarse; }
  Vector restrict_to_coarse(const Vector &fine) const { return restriction * fine; }
  /// Coarse representation of a fine state (used to rediscretise coarse operators).
  Vector inject(const Vector &fine) const { return injection * fine; }
};

/// Requires matching species count and degree (level-mismatch otherwise).
LevelTransfer build_transfer(const FieldLayout &coarse, const FieldLayout &fine,
                             const RefinementMap &map);

/// Block-diagonal repetition: `n` copies of `a` then `n` copies of `b`.
SparseMatrix field_block_diagonal(const SparseMatrix &a, const SparseMatrix &b, int n);

}  // namespace osm
