#pragma once

#include <memory>
#include <vector>

#include "osm/assembly/assembly.hpp"
#include "osm/krylov/gmres.hpp"

namespace osm
{

enum class FluxSolverKind
{
  cholesky,
  lu,
  gmg,
};

/// Block-diagonal augmented Lagrangian preconditioner
///   diag( (A_i + kappa_i B_i^T Mp_i^{-1} B_i)^{-1}, -kappa_i Mp_i^{-1} ).
/// Newton coupling blocks are ignored. Must be set up before use.
class ALPreconditioner final : public LinearOperator
{
public:
  ALPreconditioner() = default;

  /// Direct flux solves on the flux blocks of `system.matrix`.
  void setup(const FieldLayout &layout, const BlockSystem &system,
             FluxSolverKind kind = FluxSolverKind::cholesky);
  /// Caller-provided flux solvers, one per species.
  void setup(const FieldLayout &layout, const BlockSystem &system,
             std::vector<std::shared_ptr<const LinearOperator>> flux_solvers);

  bool ready() const { return n_ > 0; }
  int size() const override { return n_; }
  void apply(const Vector &r, Vector &z) const override;

  const Vector &kappa() const { return kappa_; }
  int species() const { return static_cast<int>(flux_.size()); }

private:
  void set_blocks(const FieldLayout &layout, const BlockSystem &system);

  int n_ = 0;
  Vector kappa_;
  std::vector<std::vector<int>> flux_;
  std::vector<std::vector<int>> potential_;
  std::vector<std::shared_ptr<const LinearOperator>> flux_solvers_;
  std::vector<Vector> schur_;
};

/// Per-species flux block of an assembled system (essential rows kept as identity).
SparseMatrix flux_block(const FieldLayout &layout, const BlockSystem &system, int species);

}  // namespace osm
