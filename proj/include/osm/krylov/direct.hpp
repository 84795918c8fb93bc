#pragma once

#include <memory>

#include "osm/krylov/sparse.hpp"

namespace osm
{

/// Sparse LU with partial pivoting and a column fill-reducing ordering.
class LuFactorization
{
public:
  explicit LuFactorization(const SparseMatrix &a);
  ~LuFactorization();
  LuFactorization(LuFactorization &&) noexcept;
  LuFactorization &operator=(LuFactorization &&) noexcept;

  Vector solve(const Vector &b) const;
  int size() const { return n_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// Sparse Cholesky; throws singular-matrix if `a` is not symmetric positive definite.
class CholeskyFactorization
{
public:
  explicit CholeskyFactorization(const SparseMatrix &a);
  ~CholeskyFactorization();
  CholeskyFactorization(CholeskyFactorization &&) noexcept;
  CholeskyFactorization &operator=(CholeskyFactorization &&) noexcept;

  Vector solve(const Vector &b) const;
  int size() const { return n_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

LuFactorization lu_factor(const SparseMatrix &a);
Vector lu_solve(const LuFactorization &f, const Vector &b);

}  // namespace osm
