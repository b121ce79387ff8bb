#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfd/dense.hpp"
#include "mfd/sparse.hpp"

using namespace mfd;

namespace {

DenseMatrix random_symmetric(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = g(rng);
      a(i, j) = a(j, i) = v;
    }
  return a;
}

}  // namespace

TEST_CASE("path-graph Laplacian has the closed-form spectrum") {
  // eigenvalues 2 - 2 cos(k pi / (n+1)), k = 1..n
  const int n = 40;
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i > 0) a(i, i - 1) = -1.0;
    if (i + 1 < n) a(i, i + 1) = -1.0;
  }
  const std::vector<double> eigs = symmetric_eigenvalues(a);
  for (int k = 1; k <= n; ++k) {
    const double expected = 2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1));
    CHECK(eigs[k - 1] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues preserve trace and Frobenius norm on random matrices") {
  std::mt19937 rng(1);
  for (const int n : {2, 7, 33, 120}) {
    const DenseMatrix a = random_symmetric(rng, n);
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += a(i, i);
    const double frob2 = frobenius_norm(a) * frobenius_norm(a);
    const std::vector<double> eigs = symmetric_eigenvalues(a);
    double s = 0.0, s2 = 0.0;
    for (double e : eigs) {
      s += e;
      s2 += e * e;
    }
    CHECK(s == doctest::Approx(trace).epsilon(1e-10));
    CHECK(s2 == doctest::Approx(frob2).epsilon(1e-12));
    CHECK(std::is_sorted(eigs.begin(), eigs.end()));
  }
}

TEST_CASE("rank-deficient PSD matrices keep their zero eigenvalues") {
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  const int n = 60, rank = 4;
  DenseMatrix b(n, rank);
  for (double& v : b.data) v = g(rng);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < rank; ++k) s += b(i, k) * b(j, k);
      a(i, j) = s;
    }
  const std::vector<double> eigs = symmetric_eigenvalues(a);
  const double scale = eigs.back();
  int positive = 0;
  for (double e : eigs) {
    CHECK(e > -1e-11 * scale);
    positive += e > 1e-9 * scale ? 1 : 0;
  }
  CHECK(positive == rank);
}

TEST_CASE("tridiagonal eigenvalues agree with the dense route") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  const int n = 25;
  std::vector<double> d(n), e(n - 1);
  for (double& v : d) v = g(rng);
  for (double& v : e) v = g(rng);
  DenseMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = d[i];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = e[i];
  }
  const std::vector<double> fast = tridiagonal_eigenvalues(d, e);
  const std::vector<double> full = symmetric_eigenvalues(a);
  for (int i = 0; i < n; ++i) CHECK(fast[i] == doctest::Approx(full[i]).epsilon(1e-11));
}

TEST_CASE("generalized eigenvalues: identity pencil and diagonal scaling") {
  std::mt19937 rng(4);
  const int n = 20;
  DenseMatrix a = random_symmetric(rng, n);
  // (A, I) reduces to the standard problem
  const std::vector<double> gen = generalized_eigenvalues(a, identity(n));
  const std::vector<double> std_eigs = symmetric_eigenvalues(a);
  for (int i = 0; i < n; ++i) CHECK(gen[i] == doctest::Approx(std_eigs[i]).epsilon(1e-11));
  // (c B, B) is constantly c
  DenseMatrix spd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) spd(i, j) = (i == j ? n + 1.0 : 0.0) + 0.3 * a(i, j) * a(j, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) spd(i, j) = spd(j, i);
  DenseMatrix scaled = spd;
  for (double& v : scaled.data) v *= 2.5;
  for (double v : generalized_eigenvalues(scaled, spd)) CHECK(v == doctest::Approx(2.5).epsilon(1e-11));
}

TEST_CASE("solve3 with pivoting, and rejection of singular systems") {
  DenseMatrix a(3, 3);
  // first pivot is zero; partial pivoting has to reorder
  const double rows[3][3] = {{0, 2, 1}, {1, 1, 0}, {2, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rows[i][j];
  const std::vector<double> x = solve3(a, {5.0, 3.0, 5.0});
  CHECK(0.0 * x[0] + 2.0 * x[1] + x[2] == doctest::Approx(5.0));
  CHECK(x[0] + x[1] == doctest::Approx(3.0));
  CHECK(2.0 * x[0] + x[2] == doctest::Approx(5.0));

  DenseMatrix sing(3, 3);
  for (int j = 0; j < 3; ++j) {
    sing(0, j) = 1.0;
    sing(1, j) = 2.0;  // row 1 = 2 * row 0
    sing(2, j) = j;
  }
  CHECK_THROWS_AS(solve3(sing, {1.0, 2.0, 3.0}), std::runtime_error);
}

TEST_CASE("cholesky solve and inverse on a random SPD matrix") {
  std::mt19937 rng(5);
  const int n = 15;
  const DenseMatrix r = random_symmetric(rng, n);
  DenseMatrix spd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = (i == j) ? n * 2.0 : 0.0;
      for (int k = 0; k < n; ++k) s += r(i, k) * r(j, k) / n;
      spd(i, j) = s;
    }
  DenseMatrix chol = spd;
  cholesky_factor(chol);
  std::normal_distribution<double> g;
  std::vector<double> b(n);
  for (double& v : b) v = g(rng);
  const std::vector<double> x = cholesky_solve(chol, b);
  const std::vector<double> back = matvec(spd, x);
  for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-10));
  const DenseMatrix inv = cholesky_inverse(chol);
  const DenseMatrix prod = matmul(spd, inv);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));

  DenseMatrix indefinite = identity(2);
  indefinite(0, 1) = indefinite(1, 0) = 3.0;
  CHECK_THROWS_AS(cholesky_factor(indefinite), std::runtime_error);
}

TEST_CASE("banded cholesky matches the dense solve") {
  std::mt19937 rng(6);
  std::normal_distribution<double> g;
  const int n = 30, bw = 3;
  DenseMatrix dense(n, n);
  BandedCholesky banded(n, bw);
  for (int i = 0; i < n; ++i) {
    dense(i, i) = 10.0 + std::abs(g(rng));
    banded.set(i, i, dense(i, i));
    for (int j = std::max(0, i - bw); j < i; ++j) {
      const double v = g(rng);
      dense(i, j) = dense(j, i) = v;
      banded.set(i, j, v);
    }
  }
  banded.factor();
  std::vector<double> b(n);
  for (double& v : b) v = g(rng);
  DenseMatrix chol = dense;
  cholesky_factor(chol);
  const std::vector<double> want = cholesky_solve(chol, b);
  const std::vector<double> got = banded.solve(b);
  for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11));

  CHECK_THROWS_AS(banded.set(10, 2, 1.0), std::invalid_argument);
}

TEST_CASE("reverse Cuthill-McKee produces a bandwidth-reducing permutation") {
  // ring of 40 vertices plus one chord; natural ordering of the ring already
  // has bandwidth n-1 because of the wraparound edge
  const int n = 40;
  std::vector<Triplet> trips;
  for (int i = 0; i < n; ++i) {
    trips.push_back({i, i, 4.0});
    const int j = (i + 1) % n;
    trips.push_back({i, j, -1.0});
    trips.push_back({j, i, -1.0});
  }
  const SparseOperator a = operator_from_triplets(n, std::move(trips));
  const std::vector<int> perm = reverse_cuthill_mckee(a);
  REQUIRE(static_cast<int>(perm.size()) == n);
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    REQUIRE(p >= 0);
    REQUIRE(p < n);
    ++seen[p];
  }
  for (int s : seen) CHECK(s == 1);
  std::vector<int> inv(n);
  for (int k = 0; k < n; ++k) inv[perm[k]] = k;
  int bw = 0;
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      bw = std::max(bw, std::abs(inv[i] - inv[a.col_idx[k]]));
  CHECK(bw <= 3);
}
