#include "osm/krylov/direct.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "osm/error.hpp"

namespace osm
{

struct LuFactorization::Impl
{
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, int>, Eigen::COLAMDOrdering<int>> lu;
};

LuFactorization::LuFactorization(const SparseMatrix &a) : impl_(std::make_unique<Impl>())
{
  OSM_REQUIRE(a.rows() == a.cols(), ErrorCode::invalid_argument, "LU needs a square matrix");
  n_ = static_cast<int>(a.rows());
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> col = a;
  col.makeCompressed();
  impl_->lu.analyzePattern(col);
  impl_->lu.factorize(col);
  if (impl_->lu.info() != Eigen::Success)
  {
    throw Error(ErrorCode::singular_matrix, "sparse LU failed: " + impl_->lu.lastErrorMessage());
  }
}

LuFactorization::~LuFactorization() = default;
LuFactorization::LuFactorization(LuFactorization &&) noexcept = default;
LuFactorization &LuFactorization::operator=(LuFactorization &&) noexcept = default;

Vector LuFactorization::solve(const Vector &b) const
{
  OSM_REQUIRE(b.size() == n_, ErrorCode::invalid_argument, "right-hand side length mismatch");
  Vector x = impl_->lu.solve(b);
  return x;
}

struct CholeskyFactorization::Impl
{
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double, Eigen::ColMajor, int>, Eigen::Lower,
                       Eigen::AMDOrdering<int>>
      llt;
};

CholeskyFactorization::CholeskyFactorization(const SparseMatrix &a) : impl_(std::make_unique<Impl>())
{
  OSM_REQUIRE(a.rows() == a.cols(), ErrorCode::invalid_argument, "Cholesky needs a square matrix");
  n_ = static_cast<int>(a.rows());
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> col = a;
  impl_->llt.compute(col);
  if (impl_->llt.info() != Eigen::Success)
  {
    throw Error(ErrorCode::singular_matrix, "matrix is not symmetric positive definite");
  }
}

CholeskyFactorization::~CholeskyFactorization() = default;
CholeskyFactorization::CholeskyFactorization(CholeskyFactorization &&) noexcept = default;
CholeskyFactorization &CholeskyFactorization::operator=(CholeskyFactorization &&) noexcept = default;

Vector CholeskyFactorization::solve(const Vector &b) const
{
  OSM_REQUIRE(b.size() == n_, ErrorCode::invalid_argument, "right-hand side length mismatch");
  Vector x = impl_->llt.solve(b);
  return x;
}

LuFactorization lu_factor(const SparseMatrix &a)
{
  return LuFactorization(a);
}

Vector lu_solve(const LuFactorization &f, const Vector &b)
{
  return f.solve(b);
}

}  // namespace osm
