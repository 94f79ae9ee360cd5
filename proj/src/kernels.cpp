#include "rydion/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rydion::kernels {

namespace scalar {

void axpy(cplx* y, const cplx* x, double a, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void axpy(cplx* y, const cplx* x, cplx a, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void scale(cplx* x, double a, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) x[k] *= a;
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    re += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
    im += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
  }
  return {re, im};
}

double norm_sq(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += x[k].real() * x[k].real() + x[k].imag() * x[k].imag();
  }
  return acc;
}

void diag_axpy(cplx* y, const double* d, const cplx* x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += d[k] * x[k];
}

}  // namespace scalar

namespace {

bool detect_avx2() {
#if defined(RYDION_HAVE_AVX2_UNIT) && defined(__GNUC__)
  if (const char* env = std::getenv("RYDION_KERNEL_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return false;
  }
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

// Decided once; all entry points branch on this flag. The branch itself is
// negligible next to the O(n) work of every kernel.
const bool use_avx2 = detect_avx2();

}  // namespace

bool avx2_available() {
#if defined(RYDION_HAVE_AVX2_UNIT) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return use_avx2 ? Backend::avx2 : Backend::scalar; }

const char* backend_name() { return use_avx2 ? "avx2" : "scalar"; }

#if defined(RYDION_HAVE_AVX2_UNIT)
#define RYDION_DISPATCH(call) \
  do {                        \
    if (use_avx2) {           \
      return avx2::call;      \
    }                         \
    return scalar::call;      \
  } while (0)
#else
#define RYDION_DISPATCH(call) return scalar::call
#endif

void axpy(cplx* y, const cplx* x, double a, std::size_t n) {
  RYDION_DISPATCH(axpy(y, x, a, n));
}

void axpy(cplx* y, const cplx* x, cplx a, std::size_t n) {
  RYDION_DISPATCH(axpy(y, x, a, n));
}

void scale(cplx* x, double a, std::size_t n) {
  RYDION_DISPATCH(scale(x, a, n));
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  RYDION_DISPATCH(dot(x, y, n));
}

double norm_sq(const cplx* x, std::size_t n) {
  RYDION_DISPATCH(norm_sq(x, n));
}

void diag_axpy(cplx* y, const double* d, const cplx* x, std::size_t n) {
  RYDION_DISPATCH(diag_axpy(y, d, x, n));
}

#undef RYDION_DISPATCH

}  // namespace rydion::kernels
