#include "osm/krylov/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "osm/error.hpp"

namespace osm
{

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet> &entries)
{
  SparseMatrix a(rows, cols);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

Eigen::MatrixXd dense_submatrix(const SparseMatrix &a, std::span<const int> rows,
                                std::span<const int> cols)
{
  std::unordered_map<int, int> where;
  where.reserve(cols.size() * 2);
  for (std::size_t j = 0; j < cols.size(); ++j)
  {
    where.emplace(cols[j], static_cast<int>(j));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (SparseMatrix::InnerIterator it(a, rows[i]); it; ++it)
    {
      const auto found = where.find(it.col());
      if (found != where.end())
      {
        out(static_cast<Eigen::Index>(i), found->second) = it.value();
      }
    }
  }
  return out;
}

SparseMatrix sparse_submatrix(const SparseMatrix &a, std::span<const int> rows,
                              std::span<const int> cols)
{
  std::vector<int> where(a.cols(), -1);
  for (std::size_t j = 0; j < cols.size(); ++j)
  {
    where[cols[j]] = static_cast<int>(j);
  }
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (SparseMatrix::InnerIterator it(a, rows[i]); it; ++it)
    {
      if (where[it.col()] >= 0)
      {
        t.emplace_back(static_cast<int>(i), where[it.col()], it.value());
      }
    }
  }
  return from_triplets(static_cast<int>(rows.size()), static_cast<int>(cols.size()), t);
}

SparseMatrix identity_matrix(int n)
{
  SparseMatrix a(n, n);
  a.setIdentity();
  a.makeCompressed();
  return a;
}

SparseMatrix pruned(const SparseMatrix &a, double tol)
{
  SparseMatrix out = a;
  out.prune([tol](int, int, double v) { return std::abs(v) > tol; });
  out.makeCompressed();
  return out;
}

SparseMatrix eliminate_rows_cols(const SparseMatrix &a, const std::vector<bool> &mask)
{
  OSM_REQUIRE(a.rows() == a.cols() && static_cast<Eigen::Index>(mask.size()) == a.rows(),
              ErrorCode::invalid_argument, "mask does not match matrix");
  std::vector<Triplet> t;
  t.reserve(a.nonZeros());
  for (int r = 0; r < a.rows(); ++r)
  {
    if (mask[r])
    {
      t.emplace_back(r, r, 1.0);
      continue;
    }
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
    {
      if (!mask[it.col()])
      {
        t.emplace_back(r, it.col(), it.value());
      }
    }
  }
  return from_triplets(static_cast<int>(a.rows()), static_cast<int>(a.cols()), t);
}

double asymmetry(const SparseMatrix &a)
{
  const SparseMatrix at = a.transpose();
  const SparseMatrix d = a - at;
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
  {
    for (SparseMatrix::InnerIterator it(d, k); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

void write_coordinate(std::ostream &os, const SparseMatrix &a)
{
  os.precision(17);
  os << a.rows() << " " << a.cols() << " " << a.nonZeros() << "\n";
  for (int r = 0; r < a.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
    {
      os << r << " " << it.col() << " " << it.value() << "\n";
    }
  }
}

}  // namespace osm
