// NEON kernel variants for aarch64.

#if defined(__ARM_NEON) || defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

#include "mfd/kernels.hpp"

namespace mfd::kernels::neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double nrm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(y + i);
    vy = vfmaq_f64(vld1q_f64(x + i), vb, vy);
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void spmv_rows(int r0, int r1, const int* row_ptr, const int* col_idx,
               const double* values, const double* x, double* y) {
  for (int i = r0; i < r1; ++i) {
    const int k0 = row_ptr[i];
    const int k1 = row_ptr[i + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    int k = k0;
    for (; k + 2 <= k1; k += 2) {
      const float64x2_t xv = {x[col_idx[k]], x[col_idx[k + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(values + k), xv);
    }
    double s = vaddvq_f64(acc);
    for (; k < k1; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

}  // namespace mfd::kernels::neon

#endif  // __ARM_NEON || __aarch64__
