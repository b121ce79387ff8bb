// Backend selection and row-partitioned spmv driver.

#include "mfd/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>
#include <vector>

namespace mfd::kernels {

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*nrm2)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*xpby)(const double*, double, double*, std::size_t);
  void (*spmv_rows)(int, int, const int*, const int*, const double*, const double*, double*);
};

constexpr Vtable kScalar{scalar::dot, scalar::nrm2, scalar::axpy, scalar::xpby, scalar::spmv_rows};

#if defined(MFD_HAVE_AVX2)
constexpr Vtable kAvx2{avx2::dot, avx2::nrm2, avx2::axpy, avx2::xpby, avx2::spmv_rows};
#endif
#if defined(MFD_HAVE_NEON)
constexpr Vtable kNeon{neon::dot, neon::nrm2, neon::axpy, neon::xpby, neon::spmv_rows};
#endif

std::atomic<const Vtable*> g_vtable{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};
int g_threads = 1;
std::once_flag g_init;

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(MFD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(MFD_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Vtable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &kScalar;
    case Backend::Avx2:
#if defined(MFD_HAVE_AVX2)
      return &kAvx2;
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(MFD_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend pick_default() {
  if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
  if (cpu_supports(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

void init_once() {
  std::call_once(g_init, [] {
    Backend b = pick_default();
    if (const char* env = std::getenv("MFD_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) b = Backend::Scalar;
      else if (std::strcmp(env, "avx2") == 0 && cpu_supports(Backend::Avx2)) b = Backend::Avx2;
      else if (std::strcmp(env, "neon") == 0 && cpu_supports(Backend::Neon)) b = Backend::Neon;
    }
    g_backend.store(b);
    g_vtable.store(table_for(b));
    g_threads = 1;
    if (const char* env = std::getenv("MFD_THREADS")) {
      const int t = std::atoi(env);
      if (t >= 1 && t <= 256) g_threads = t;
    }
  });
}

const Vtable& vt() {
  init_once();
  return *g_vtable.load();
}

}  // namespace

Backend active_backend() {
  init_once();
  return g_backend.load();
}

bool backend_available(Backend b) { return cpu_supports(b); }

bool set_backend(Backend b) {
  init_once();
  if (!cpu_supports(b)) return false;
  g_backend.store(b);
  g_vtable.store(table_for(b));
  return true;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "?";
}

int thread_count() {
  init_once();
  return g_threads;
}

double dot(const double* x, const double* y, std::size_t n) { return vt().dot(x, y, n); }
double nrm2(const double* x, std::size_t n) { return vt().nrm2(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { vt().axpy(a, x, y, n); }
void xpby(const double* x, double b, double* y, std::size_t n) { vt().xpby(x, b, y, n); }

void spmv(int n, const int* row_ptr, const int* col_idx, const double* values,
          const double* x, double* y) {
  const Vtable& t = vt();
  const int workers = thread_count();
  if (workers <= 1 || n < 8192) {
    t.spmv_rows(0, n, row_ptr, col_idx, values, x, y);
    return;
  }
  // Fixed row partition: identical results for any worker count.
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int r0 = w * chunk;
    const int r1 = std::min(n, r0 + chunk);
    if (r0 >= r1) break;
    pool.emplace_back([&, r0, r1] { t.spmv_rows(r0, r1, row_ptr, col_idx, values, x, y); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mfd::kernels
