#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace osm
{

/// Compressed row storage with sorted, unique column indices.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;
using Vector = Eigen::VectorXd;

/// Sums duplicates and compresses.
SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet> &entries);

/// Dense copy of A(rows, cols).
Eigen::MatrixXd dense_submatrix(const SparseMatrix &a, std::span<const int> rows,
                                std::span<const int> cols);

/// Sparse copy of A(rows, cols).
SparseMatrix sparse_submatrix(const SparseMatrix &a, std::span<const int> rows,
                              std::span<const int> cols);

SparseMatrix identity_matrix(int n);

/// Entries of magnitude <= tol are dropped.
SparseMatrix pruned(const SparseMatrix &a, double tol);

/// Replaces rows and columns flagged in `mask` by identity rows/columns.
SparseMatrix eliminate_rows_cols(const SparseMatrix &a, const std::vector<bool> &mask);

/// Largest |a_ij - a_ji|.
double asymmetry(const SparseMatrix &a);

/// "row col value" per line, zero-based, preceded by a "rows cols nnz" header.
void write_coordinate(std::ostream &os, const SparseMatrix &a);

}  // namespace osm
