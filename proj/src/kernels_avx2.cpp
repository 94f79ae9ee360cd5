// AVX2+FMA kernels on interleaved complex<double> data, two complex numbers
// per 256-bit register. Compiled with -mavx2 -mfma; must only be entered
// after a CPUID check (see kernels.cpp). Remainders fall back to the scalar
// loops element by element.

#include <immintrin.h>

#include "rydion/kernels.hpp"

namespace rydion::kernels::avx2 {

namespace {

// [re0 im0 re1 im1] -> [im0 re0 im1 re1]
inline __m256d swap_halves(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void axpy(cplx* y, const cplx* x, double a, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  const __m256d av = _mm256_set1_pd(a);
  std::size_t k = 0, nd = 2 * n;
  for (; k + 4 <= nd; k += 4) {
    __m256d yv = _mm256_loadu_pd(yd + k);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(xd + k), yv);
    _mm256_storeu_pd(yd + k, yv);
  }
  for (; k < nd; ++k) yd[k] += a * xd[k];
}

void axpy(cplx* y, const cplx* x, cplx a, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t k = 0, nd = 2 * n;
  for (; k + 4 <= nd; k += 4) {
    __m256d xv = _mm256_loadu_pd(xd + k);
    // (ar + i ai)(xr + i xi): even lanes get ar*xr - ai*xi, odd lanes
    // ar*xi + ai*xr; fmaddsub provides exactly that alternation.
    __m256d t = _mm256_mul_pd(swap_halves(xv), ai);
    __m256d prod = _mm256_fmaddsub_pd(xv, ar, t);
    _mm256_storeu_pd(yd + k, _mm256_add_pd(_mm256_loadu_pd(yd + k), prod));
  }
  for (; k < nd; k += 2) {
    double xr = xd[k], xi = xd[k + 1];
    yd[k] += a.real() * xr - a.imag() * xi;
    yd[k + 1] += a.real() * xi + a.imag() * xr;
  }
}

void scale(cplx* x, double a, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  const __m256d av = _mm256_set1_pd(a);
  std::size_t k = 0, nd = 2 * n;
  for (; k + 4 <= nd; k += 4) {
    _mm256_storeu_pd(xd + k, _mm256_mul_pd(av, _mm256_loadu_pd(xd + k)));
  }
  for (; k < nd; ++k) xd[k] *= a;
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const auto* yd = reinterpret_cast<const double*>(y);
  // Lane-wise x.*y sums to the real part (xr*yr + xi*yi per element);
  // swap(x).*y with alternating signs sums to the imaginary part.
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t k = 0, nd = 2 * n;
  for (; k + 4 <= nd; k += 4) {
    __m256d xv = _mm256_loadu_pd(xd + k);
    __m256d yv = _mm256_loadu_pd(yd + k);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    acc_im = _mm256_addsub_pd(acc_im, _mm256_mul_pd(swap_halves(xv), yv));
  }
  double re = hsum(acc_re), im = hsum(acc_im);
  for (; k < nd; k += 2) {
    double xr = xd[k], xi = xd[k + 1], yr = yd[k], yi = yd[k + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double norm_sq(const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0, nd = 2 * n;
  for (; k + 4 <= nd; k += 4) {
    __m256d xv = _mm256_loadu_pd(xd + k);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  double s = hsum(acc);
  for (; k < nd; ++k) s += xd[k] * xd[k];
  return s;
}

void diag_axpy(cplx* y, const double* d, const cplx* x, std::size_t n) {
  auto* yd = reinterpret_cast<double*>(y);
  const auto* xd = reinterpret_cast<const double*>(x);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    // Expand [d0 d1] to [d0 d0 d1 d1] to match the interleaved layout.
    __m256d dv = _mm256_permute4x64_pd(
        _mm256_castpd128_pd256(_mm_loadu_pd(d + k)), 0x50);
    __m256d yv = _mm256_loadu_pd(yd + 2 * k);
    yv = _mm256_fmadd_pd(dv, _mm256_loadu_pd(xd + 2 * k), yv);
    _mm256_storeu_pd(yd + 2 * k, yv);
  }
  for (; k < n; ++k) {
    yd[2 * k] += d[k] * xd[2 * k];
    yd[2 * k + 1] += d[k] * xd[2 * k + 1];
  }
}

}  // namespace rydion::kernels::avx2
