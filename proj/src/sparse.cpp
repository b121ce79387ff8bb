#include "mfd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "mfd/kernels.hpp"

namespace mfd {

double SparseOperator::entry(int i, int j) const {
  for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col_idx[k] == j) return values[k];
  return 0.0;
}

int SparseOperator::max_row_nnz() const {
  int m = 0;
  for (int i = 0; i < n; ++i) m = std::max(m, row_ptr[i + 1] - row_ptr[i]);
  return m;
}

std::vector<double> SparseOperator::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = entry(i, i);
  return d;
}

void SparseOperator::multiply(const double* x, double* y) const {
  kernels::spmv(n, row_ptr.data(), col_idx.data(), values.data(), x, y);
}

std::vector<double> SparseOperator::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n && !(n == 0 && x.empty()))
    throw std::invalid_argument("SparseOperator::multiply: size mismatch");
  std::vector<double> y(n, 0.0);
  if (n > 0) multiply(x.data(), y.data());
  return y;
}

bool SparseOperator::is_symmetric(double tol) const {
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const int j = col_idx[k];
      const double scale = std::abs(values[k]) + std::abs(entry(j, i));
      if (std::abs(values[k] - entry(j, i)) > tol * std::max(1.0, scale)) return false;
    }
  return true;
}

SparseOperator operator_from_triplets(int n, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  SparseOperator a;
  a.n = n;
  a.row_ptr.assign(n + 1, 0);
  std::size_t k = 0;
  while (k < triplets.size()) {
    const int i = triplets[k].i;
    const int j = triplets[k].j;
    if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("triplet index out of range");
    double s = 0.0;
    while (k < triplets.size() && triplets[k].i == i && triplets[k].j == j) s += triplets[k++].v;
    a.col_idx.push_back(j);
    a.values.push_back(s);
    ++a.row_ptr[i + 1];
  }
  for (int i = 0; i < n; ++i) a.row_ptr[i + 1] += a.row_ptr[i];
  return a;
}

DenseMatrix to_dense(const SparseOperator& a) {
  DenseMatrix d(a.n, a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) d(i, a.col_idx[k]) = a.values[k];
  return d;
}

SparseOperator sparse_transpose(const SparseOperator& a, int cols) {
  SparseOperator t;
  t.n = cols;
  t.row_ptr.assign(cols + 1, 0);
  for (int j : a.col_idx) ++t.row_ptr[j + 1];
  for (int i = 0; i < cols; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col_idx.assign(a.col_idx.size(), 0);
  t.values.assign(a.values.size(), 0.0);
  std::vector<int> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int pos = cursor[a.col_idx[k]]++;
      t.col_idx[pos] = i;
      t.values[pos] = a.values[k];
    }
  return t;
}

SparseOperator sparse_matmul(const SparseOperator& a, const SparseOperator& b) {
  // Row-at-a-time with a dense accumulator; touched columns are sorted so
  // the result is deterministic.
  SparseOperator c;
  c.n = a.n;
  c.row_ptr.assign(a.n + 1, 0);
  int bcols = 0;
  for (int j : b.col_idx) bcols = std::max(bcols, j + 1);
  std::vector<double> acc(std::max(bcols, 1), 0.0);
  std::vector<int> mark(std::max(bcols, 1), -1);
  std::vector<int> touched;
  for (int i = 0; i < a.n; ++i) {
    touched.clear();
    for (int ka = a.row_ptr[i]; ka < a.row_ptr[i + 1]; ++ka) {
      const int j = a.col_idx[ka];
      const double av = a.values[ka];
      for (int kb = b.row_ptr[j]; kb < b.row_ptr[j + 1]; ++kb) {
        const int col = b.col_idx[kb];
        if (mark[col] != i) {
          mark[col] = i;
          acc[col] = 0.0;
          touched.push_back(col);
        }
        acc[col] += av * b.values[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int col : touched) {
      c.col_idx.push_back(col);
      c.values.push_back(acc[col]);
    }
    c.row_ptr[i + 1] = static_cast<int>(c.col_idx.size());
  }
  return c;
}

void write_coordinate(const SparseOperator& a, std::ostream& out) {
  char buf[64];
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, a.col_idx[k], a.values[k]);
      out << buf;
    }
}

void write_vector(const std::vector<double>& v, std::ostream& out) {
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

std::vector<int> reverse_cuthill_mckee(const SparseOperator& a) {
  const int n = a.n;
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col_idx[k] != i) ++degree[i];

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> visited(n, 0);
  for (int start = 0; static_cast<int>(order.size()) < n; ++start) {
    // Next unvisited vertex of minimum degree seeds the BFS.
    int seed = -1;
    for (int i = 0; i < n; ++i)
      if (!visited[i] && (seed < 0 || degree[i] < degree[seed])) seed = i;
    if (seed < 0) break;
    std::queue<int> q;
    q.push(seed);
    visited[seed] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      order.push_back(u);
      std::vector<int> nbrs;
      for (int k = a.row_ptr[u]; k < a.row_ptr[u + 1]; ++k) {
        const int v = a.col_idx[k];
        if (v != u && !visited[v]) nbrs.push_back(v);
      }
      std::sort(nbrs.begin(), nbrs.end(),
                [&](int x, int y) { return degree[x] != degree[y] ? degree[x] < degree[y] : x < y; });
      for (int v : nbrs) {
        visited[v] = 1;
        q.push(v);
      }
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace mfd
