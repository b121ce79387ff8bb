#pragma once

#include <cstddef>
#include <vector>

namespace mfd {

/// Row-major dense matrix. Small sizes only (local element matrices,
/// eigen oracles, coarse factorizations at desk scale).
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

DenseMatrix identity(int n);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);
double max_abs(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);

/// Solve a*x = b for a 3x3 system by LU with partial pivoting.
/// Throws std::runtime_error on (near-)singular input.
std::vector<double> solve3(const DenseMatrix& a, const std::vector<double>& b);

/// In-place lower Cholesky of an SPD matrix. Throws on a nonpositive pivot.
void cholesky_factor(DenseMatrix& a);
std::vector<double> cholesky_solve(const DenseMatrix& chol, const std::vector<double>& b);
/// Inverse from a Cholesky factor.
DenseMatrix cholesky_inverse(const DenseMatrix& chol);

/// All eigenvalues (ascending) of a symmetric matrix.
/// Householder tridiagonalization followed by implicit-shift QL.
std::vector<double> symmetric_eigenvalues(DenseMatrix a);

/// Eigenvalues of a symmetric tridiagonal matrix: diag d[0..n-1],
/// subdiagonal e[0..n-2].
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e);

/// Eigenvalues (ascending) of the pencil (a, b) with b SPD.
std::vector<double> generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& b);

/// Symmetric banded lower-Cholesky factorization. `bandwidth` is the
/// number of subdiagonals kept; entries outside the band must be zero.
class BandedCholesky {
 public:
  BandedCholesky(int n, int bandwidth);

  /// Stage the (i, j) entry of the lower triangle (j <= i, i - j <= bandwidth).
  void set(int i, int j, double value);
  /// Factor in place. Throws on a nonpositive pivot.
  void factor();
  std::vector<double> solve(const std::vector<double>& b) const;

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

 private:
  double& at(int i, int j) { return band_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }
  double at(int i, int j) const { return band_[static_cast<std::size_t>(i) * (bw_ + 1) + (j - i + bw_)]; }

  int n_ = 0;
  int bw_ = 0;
  bool factored_ = false;
  std::vector<double> band_;
};

}  // namespace mfd
