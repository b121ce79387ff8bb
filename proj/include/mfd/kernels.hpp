#pragma once

#include <cstddef>

namespace mfd::kernels {

/// Vector/CSR kernel backends. Scalar is the reference implementation;
/// SIMD variants must agree with it to round-off and are selected at
/// runtime from CPU capabilities (override with MFD_KERNELS=scalar|avx2|neon).
enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
bool backend_available(Backend b);
/// Returns false (and keeps the current backend) if `b` is unavailable.
bool set_backend(Backend b);
const char* backend_name(Backend b);

/// Worker count for row-partitioned spmv, from MFD_THREADS (default 1).
int thread_count();

double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
/// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
/// y = x + b*y
void xpby(const double* x, double b, double* y, std::size_t n);
/// y = A*x for CSR (row_ptr, col_idx, values). Deterministic for any
/// thread count: each row is reduced sequentially by one worker.
void spmv(int n, const int* row_ptr, const int* col_idx, const double* values,
          const double* x, double* y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv_rows(int r0, int r1, const int* row_ptr, const int* col_idx,
               const double* values, const double* x, double* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv_rows(int r0, int r1, const int* row_ptr, const int* col_idx,
               const double* values, const double* x, double* y);
}  // namespace avx2
#endif

#if defined(__ARM_NEON) || defined(__aarch64__)
namespace neon {
double dot(const double* x, const double* y, std::size_t n);
double nrm2(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv_rows(int r0, int r1, const int* row_ptr, const int* col_idx,
               const double* values, const double* x, double* y);
}  // namespace neon
#endif

}  // namespace mfd::kernels
