#pragma once

#include <iosfwd>
#include <vector>

#include "mfd/dense.hpp"

namespace mfd {

struct Triplet {
  int i = 0;
  int j = 0;
  double v = 0.0;
};

/// Symmetric sparse matrix in compressed-row layout. Both triangles are
/// stored explicitly so tests can address any entry and spmv stays a plain
/// row reduction.
struct SparseOperator {
  int n = 0;
  std::vector<int> row_ptr;   // size n+1
  std::vector<int> col_idx;   // ascending within each row
  std::vector<double> values;

  std::size_t nnz() const { return col_idx.size(); }
  double entry(int i, int j) const;
  int max_row_nnz() const;
  std::vector<double> diagonal() const;

  void multiply(const double* x, double* y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  bool is_symmetric(double tol) const;
};

/// Build from triplets; duplicate (i, j) entries are summed. Deterministic
/// for any input order of equal content.
SparseOperator operator_from_triplets(int n, std::vector<Triplet> triplets);

DenseMatrix to_dense(const SparseOperator& a);
SparseOperator sparse_transpose(const SparseOperator& a, int cols);
/// C = A * B with A in rows_a x n and B in n x cols_b CSR form.
SparseOperator sparse_matmul(const SparseOperator& a, const SparseOperator& b);

/// Coordinate text export, `i j value` per line, 0-based.
void write_coordinate(const SparseOperator& a, std::ostream& out);
/// One value per line, full precision.
void write_vector(const std::vector<double>& v, std::ostream& out);

/// Reverse Cuthill-McKee ordering of the sparsity graph; perm[k] = old index
/// placed at position k.
std::vector<int> reverse_cuthill_mckee(const SparseOperator& a);

}  // namespace mfd
