#pragma once

#include <functional>
#include <vector>

#include "osm/krylov/sparse.hpp"

namespace osm
{

/// Linear map y = op(x); implementations must not alias x and y.
class LinearOperator
{
public:
  virtual ~LinearOperator() = default;
  virtual int size() const = 0;
  virtual void apply(const Vector &x, Vector &y) const = 0;

  Vector operator()(const Vector &x) const
  {
    Vector y(size());
    apply(x, y);
    return y;
  }
};

class MatrixOperator final : public LinearOperator
{
public:
  explicit MatrixOperator(const SparseMatrix &a) : a_(&a) {}
  int size() const override { return static_cast<int>(a_->rows()); }
  void apply(const Vector &x, Vector &y) const override { y.noalias() = *a_ * x; }

private:
  const SparseMatrix *a_;
};

class FunctionOperator final : public LinearOperator
{
public:
  FunctionOperator(int n, std::function<void(const Vector &, Vector &)> f) : n_(n), f_(std::move(f)) {}
  int size() const override { return n_; }
  void apply(const Vector &x, Vector &y) const override { f_(x, y); }

private:
  int n_;
  std::function<void(const Vector &, Vector &)> f_;
};

struct KrylovConfig
{
  double rtol = 1e-5;
  double atol = 1e-50;
  int max_iterations = 200;
  /// Krylov subspace size before a restart; >= max_iterations means full GMRES.
  int restart = 200;
  /// Keep the preconditioned directions so the preconditioner may vary between steps.
  bool flexible = true;
  /// Record the basis orthogonality error (quadratic cost; for tests).
  bool check_orthogonality = false;

  void validate() const;
};

struct SolveReport
{
  int iterations = 0;
  /// Residual norm estimates, starting with the initial residual.
  std::vector<double> residuals;
  bool converged = false;
  double wall_seconds = 0.0;
};

/// Right-preconditioned (flexible) GMRES with modified Gram-Schmidt and selective
/// reorthogonalisation. `x` holds the initial guess on entry. A null preconditioner is
/// the identity.
SolveReport gmres(const LinearOperator &a, const Vector &b, Vector &x, const LinearOperator *pc,
                  const KrylovConfig &config);

/// Largest departure from orthonormality of the last Krylov basis built on this thread
/// with check_orthogonality set.
double last_basis_orthogonality_error();

}  // namespace osm
