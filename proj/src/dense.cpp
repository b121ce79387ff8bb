#include "mfd/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfd {

DenseMatrix identity(int n) {
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  DenseMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != a.cols) throw std::invalid_argument("matvec: shape mismatch");
  std::vector<double> y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::abs(v));
  return m;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

std::vector<double> solve3(const DenseMatrix& a, const std::vector<double>& b) {
  if (a.rows != 3 || a.cols != 3 || b.size() != 3) throw std::invalid_argument("solve3: expects 3x3");
  double m[3][4] = {{a(0, 0), a(0, 1), a(0, 2), b[0]},
                    {a(1, 0), a(1, 1), a(1, 2), b[1]},
                    {a(2, 0), a(2, 1), a(2, 2), b[2]}};
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(m[i][j]));
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) <= 1e-14 * scale) throw std::runtime_error("solve3: singular matrix");
    if (piv != col) std::swap(m[piv], m[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  std::vector<double> x(3);
  for (int i = 2; i >= 0; --i) {
    double s = m[i][3];
    for (int j = i + 1; j < 3; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

void cholesky_factor(DenseMatrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky: square matrix required");
  const int n = a.rows;
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (d <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = 0.0;
}

std::vector<double> cholesky_solve(const DenseMatrix& chol, const std::vector<double>& b) {
  const int n = chol.rows;
  std::vector<double> x(b);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= chol(i, k) * x[k];
    x[i] = s / chol(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= chol(k, i) * x[k];
    x[i] = s / chol(i, i);
  }
  return x;
}

DenseMatrix cholesky_inverse(const DenseMatrix& chol) {
  const int n = chol.rows;
  DenseMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = cholesky_solve(chol, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  // symmetrize away round-off
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = inv(j, i) = v;
    }
  return inv;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form.
// On return d holds the diagonal, e the subdiagonal (size n-1).
void tridiagonalize(DenseMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const int n = a.rows;
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<double> v(n), w(n), q(n);
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;  // trailing block size
    double norm2 = 0.0;
    for (int i = k + 1; i < n; ++i) norm2 += a(i, k) * a(i, k);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double x0 = a(k + 1, k);
    const double alpha = (x0 >= 0.0) ? -norm : norm;
    double vn2 = 0.0;
    for (int i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      if (i == 0) v[i] -= alpha;
      vn2 += v[i] * v[i];
    }
    if (vn2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(vn2);
    for (int i = 0; i < m; ++i) v[i] *= inv;
    // w = B v on the trailing block
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      w[i] = s;
    }
    double c = 0.0;
    for (int i = 0; i < m; ++i) c += v[i] * w[i];
    for (int i = 0; i < m; ++i) q[i] = w[i] - c * v[i];
    // B <- B - 2 v q^T - 2 q v^T
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        a(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * q[j] + q[i] * v[j]);
    a(k + 1, k) = alpha;
    a(k, k + 1) = alpha;
    for (int i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
  }
  for (int i = 0; i < n; ++i) d[i] = a(i, i);
  for (int i = 0; i + 1 < n; ++i) e[i] = a(i + 1, i);
}

// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
void ql_implicit(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  e.resize(n, 0.0);  // workspace slot e[n-1]
  const double eps = 2.22e-16;
  double anorm = 0.0;
  for (double v : d) anorm = std::max(anorm, std::abs(v));
  for (double v : e) anorm = std::max(anorm, std::abs(v));
  const double floor_tol = eps * std::max(anorm, 1e-300);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = 0;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd + floor_tol) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tridiagonal QL: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
}

}  // namespace

std::vector<double> symmetric_eigenvalues(DenseMatrix a) {
  if (a.rows != a.cols) throw std::invalid_argument("symmetric_eigenvalues: square matrix required");
  std::vector<double> d, e;
  tridiagonalize(a, d, e);
  ql_implicit(d, e);
  return d;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  if (!d.empty() && e.size() + 1 != d.size()) throw std::invalid_argument("tridiagonal_eigenvalues: size mismatch");
  ql_implicit(d, e);
  return d;
}

std::vector<double> generalized_eigenvalues(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != a.cols || b.rows != b.cols || a.rows != b.rows)
    throw std::invalid_argument("generalized_eigenvalues: shape mismatch");
  const int n = a.rows;
  DenseMatrix l = b;
  cholesky_factor(l);
  // W = L^{-1} A  (forward solve per column)
  DenseMatrix w(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < i; ++k) s -= l(i, k) * w(k, j);
      w(i, j) = s / l(i, i);
    }
  }
  // C = L^{-1} W^T, then symmetrize
  DenseMatrix c(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = w(j, i);
      for (int k = 0; k < i; ++k) s -= l(i, k) * c(k, j);
      c(i, j) = s / l(i, i);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = c(j, i) = v;
    }
  return symmetric_eigenvalues(c);
}

BandedCholesky::BandedCholesky(int n, int bandwidth) : n_(n), bw_(bandwidth) {
  if (n < 1) throw std::invalid_argument("BandedCholesky: empty system");
  bw_ = std::clamp(bw_, 0, n - 1);
  band_.assign(static_cast<std::size_t>(n_) * (bw_ + 1), 0.0);
}

void BandedCholesky::set(int i, int j, double value) {
  if (j > i) std::swap(i, j);
  if (i - j > bw_) throw std::invalid_argument("BandedCholesky: entry outside band");
  at(i, j) = value;
}

void BandedCholesky::factor() {
  for (int j = 0; j < n_; ++j) {
    double d = at(j, j);
    const int k0 = std::max(0, j - bw_);
    for (int k = k0; k < j; ++k) d -= at(j, k) * at(j, k);
    if (d <= 0.0) throw std::runtime_error("BandedCholesky: matrix not positive definite");
    const double ljj = std::sqrt(d);
    at(j, j) = ljj;
    const int imax = std::min(n_ - 1, j + bw_);
    for (int i = j + 1; i <= imax; ++i) {
      double s = at(i, j);
      const int kk0 = std::max({0, i - bw_, j - bw_});
      for (int k = kk0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / ljj;
    }
  }
  factored_ = true;
}

std::vector<double> BandedCholesky::solve(const std::vector<double>& b) const {
  if (!factored_) throw std::runtime_error("BandedCholesky: solve before factor");
  if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedCholesky: rhs size mismatch");
  std::vector<double> x(b);
  for (int i = 0; i < n_; ++i) {
    double s = x[i];
    const int k0 = std::max(0, i - bw_);
    for (int k = k0; k < i; ++k) s -= at(i, k) * x[k];
    x[i] = s / at(i, i);
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    const int kmax = std::min(n_ - 1, i + bw_);
    for (int k = i + 1; k <= kmax; ++k) s -= at(k, i) * x[k];
    x[i] = s / at(i, i);
  }
  return x;
}

}  // namespace mfd
