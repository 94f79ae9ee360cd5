#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "rydion/kernels.hpp"

namespace k = rydion::kernels;
using k::cplx;

namespace {

// Lengths chosen to exercise the vector body, the scalar tail, and the
// degenerate edges of the SIMD loops.
const std::vector<std::size_t> lengths = {0, 1, 2, 3, 4, 5, 7, 8,
                                          15, 16, 64, 513, 1000};

std::vector<cplx> random_vec(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(dist(rng), dist(rng));
  return v;
}

std::vector<double> random_real(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void check_close(const std::vector<cplx>& a, const std::vector<cplx>& b,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(a[i] - b[i]) <= tol * (1.0 + std::abs(b[i])));
  }
}

}  // namespace

TEST_CASE("backend report is consistent") {
  std::string name = k::backend_name();
  CHECK((name == "scalar" || name == "avx2"));
  if (name == "avx2") CHECK(k::avx2_available());
  CHECK((k::active_backend() == k::Backend::scalar ||
         k::active_backend() == k::Backend::avx2));
  // The environment override forces the reference path (exercised by a
  // second ctest invocation of this binary).
  const char* env = std::getenv("RYDION_KERNEL_BACKEND");
  if (env && std::string(env) == "scalar") CHECK(name == "scalar");
}

TEST_CASE("axpy with a real coefficient matches the reference") {
  std::mt19937 rng(101);
  for (std::size_t n : lengths) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    auto y_ref = y;
    k::axpy(y.data(), x.data(), 0.37, n);
    k::scalar::axpy(y_ref.data(), x.data(), 0.37, n);
    check_close(y, y_ref, 1e-14);
  }
}

TEST_CASE("axpy with a complex coefficient matches the reference") {
  std::mt19937 rng(102);
  const cplx a(0.2, -0.9);
  for (std::size_t n : lengths) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    auto y_ref = y;
    k::axpy(y.data(), x.data(), a, n);
    k::scalar::axpy(y_ref.data(), x.data(), a, n);
    check_close(y, y_ref, 1e-14);
  }
}

TEST_CASE("axpy with a complex coefficient is correct") {
  // Independent of any backend: verify against the defining loop.
  std::mt19937 rng(103);
  const cplx a(-0.64, 0.11);
  auto x = random_vec(rng, 257);
  auto y = random_vec(rng, 257);
  auto expect = y;
  for (std::size_t i = 0; i < x.size(); ++i) expect[i] += a * x[i];
  k::axpy(y.data(), x.data(), a, x.size());
  check_close(y, expect, 1e-14);
}

TEST_CASE("scale matches the reference and the definition") {
  std::mt19937 rng(104);
  for (std::size_t n : lengths) {
    auto x = random_vec(rng, n);
    auto x_ref = x;
    auto expect = x;
    for (auto& v : expect) v *= -1.7;
    k::scale(x.data(), -1.7, n);
    k::scalar::scale(x_ref.data(), -1.7, n);
    check_close(x, x_ref, 1e-14);
    check_close(x, expect, 1e-14);
  }
}

TEST_CASE("dot matches the reference") {
  std::mt19937 rng(105);
  for (std::size_t n : lengths) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    cplx d = k::dot(x.data(), y.data(), n);
    cplx d_ref = k::scalar::dot(x.data(), y.data(), n);
    CHECK(std::abs(d - d_ref) <= 1e-10 * (1.0 + std::abs(d_ref)));
  }
}

TEST_CASE("dot conjugates its first argument") {
  std::mt19937 rng(106);
  auto x = random_vec(rng, 321);
  auto y = random_vec(rng, 321);
  cplx expect(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) expect += std::conj(x[i]) * y[i];
  cplx d = k::dot(x.data(), y.data(), x.size());
  CHECK(std::abs(d - expect) <= 1e-12 * (1.0 + std::abs(expect)));
  // <x|x> is real and positive
  cplx self = k::dot(x.data(), x.data(), x.size());
  CHECK(std::abs(self.imag()) <= 1e-12 * self.real());
}

TEST_CASE("norm_sq matches dot(x, x)") {
  std::mt19937 rng(107);
  for (std::size_t n : lengths) {
    auto x = random_vec(rng, n);
    double ns = k::norm_sq(x.data(), n);
    double ns_ref = k::scalar::norm_sq(x.data(), n);
    cplx self = k::scalar::dot(x.data(), x.data(), n);
    CHECK(std::abs(ns - ns_ref) <= 1e-10 * (1.0 + ns_ref));
    CHECK(std::abs(ns - self.real()) <= 1e-10 * (1.0 + ns_ref));
    CHECK(ns >= 0.0);
  }
}

TEST_CASE("diag_axpy matches the reference and the definition") {
  std::mt19937 rng(108);
  for (std::size_t n : lengths) {
    auto x = random_vec(rng, n);
    auto d = random_real(rng, n);
    auto y = random_vec(rng, n);
    auto y_ref = y;
    auto expect = y;
    for (std::size_t i = 0; i < n; ++i) expect[i] += d[i] * x[i];
    k::diag_axpy(y.data(), d.data(), x.data(), n);
    k::scalar::diag_axpy(y_ref.data(), d.data(), x.data(), n);
    check_close(y, y_ref, 1e-14);
    check_close(y, expect, 1e-14);
  }
}

TEST_CASE("unaligned starts work") {
  // The dispatcher must not assume 32-byte alignment: offset every pointer
  // by one element and compare again.
  std::mt19937 rng(109);
  auto x = random_vec(rng, 129);
  auto y = random_vec(rng, 129);
  auto d = random_real(rng, 129);
  auto y_ref = y;
  k::axpy(y.data() + 1, x.data() + 1, 0.81, 128);
  k::scalar::axpy(y_ref.data() + 1, x.data() + 1, 0.81, 128);
  check_close(y, y_ref, 1e-14);
  y_ref = y;
  k::diag_axpy(y.data() + 1, d.data() + 1, x.data() + 1, 128);
  k::scalar::diag_axpy(y_ref.data() + 1, d.data() + 1, x.data() + 1, 128);
  check_close(y, y_ref, 1e-14);
  cplx a = k::dot(x.data() + 1, y.data() + 1, 128);
  cplx b = k::scalar::dot(x.data() + 1, y.data() + 1, 128);
  CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(b)));
}
