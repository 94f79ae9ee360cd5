#pragma once

#include <complex>
#include <cstddef>

// Vector primitives used by the matrix-free Hamiltonian application, the
// Lanczos propagator and the magnetization observables. Every operation has
// a portable scalar reference implementation and, on x86-64, an AVX2+FMA
// variant working on the interleaved (re,im) layout guaranteed for
// std::complex<double>. The variant is picked once at startup from CPUID;
// RYDION_KERNEL_BACKEND=scalar in the environment forces the reference path.
namespace rydion::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name();

// True when the AVX2 translation unit was compiled in and the CPU supports it.
bool avx2_available();

// y += a*x
void axpy(cplx* y, const cplx* x, double a, std::size_t n);
void axpy(cplx* y, const cplx* x, cplx a, std::size_t n);

// x *= a
void scale(cplx* x, double a, std::size_t n);

// sum_k conj(x_k) * y_k
cplx dot(const cplx* x, const cplx* y, std::size_t n);

// sum_k |x_k|^2
double norm_sq(const cplx* x, std::size_t n);

// y_k += d_k * x_k with a real diagonal d
void diag_axpy(cplx* y, const double* d, const cplx* x, std::size_t n);

// Reference implementations, callable directly (used by the equivalence
// tests and as the fallback backend).
namespace scalar {
void axpy(cplx* y, const cplx* x, double a, std::size_t n);
void axpy(cplx* y, const cplx* x, cplx a, std::size_t n);
void scale(cplx* x, double a, std::size_t n);
cplx dot(const cplx* x, const cplx* y, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void diag_axpy(cplx* y, const double* d, const cplx* x, std::size_t n);
}  // namespace scalar

// AVX2 implementations; defined only when the dedicated translation unit is
// built (x86-64 targets). Call through the dispatched entry points unless you
// have checked avx2_available().
namespace avx2 {
void axpy(cplx* y, const cplx* x, double a, std::size_t n);
void axpy(cplx* y, const cplx* x, cplx a, std::size_t n);
void scale(cplx* x, double a, std::size_t n);
cplx dot(const cplx* x, const cplx* y, std::size_t n);
double norm_sq(const cplx* x, std::size_t n);
void diag_axpy(cplx* y, const double* d, const cplx* x, std::size_t n);
}  // namespace avx2

}  // namespace rydion::kernels
