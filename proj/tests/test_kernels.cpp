#include <cmath>
#include <cstring>
#include <vector>

#include "bpinv/error.hpp"
#include "bpinv/kernels.hpp"
#include "bpinv/rng.hpp"
#include "doctest.h"

using namespace bpinv;
using kernels::Backend;

namespace {

std::vector<double> random_buffer(std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(kernels::available(Backend::Scalar));
  CHECK(kernels::table(Backend::Scalar).backend == Backend::Scalar);
}

TEST_CASE("scoped backend restores the previous choice") {
  const Backend before = kernels::active_backend();
  {
    kernels::ScopedBackend scope(Backend::Scalar);
    CHECK(kernels::active_backend() == Backend::Scalar);
  }
  CHECK(kernels::active_backend() == before);
}

TEST_CASE("span front-ends reject mismatched lengths") {
  std::vector<double> a(3), b(4);
  CHECK_THROWS_AS(kernels::dot(a, b), Error);
  CHECK_THROWS_AS(kernels::axpy(1.0, a, b), Error);
  CHECK_THROWS_AS(kernels::soft_threshold(a, 0.1, b), Error);
}

TEST_CASE("scalar soft threshold matches the definition") {
  const std::vector<double> z{2.0, -1.0, 0.5, -3.0, 0.0};
  std::vector<double> out(z.size());
  kernels::table(Backend::Scalar).soft_threshold(z.data(), 1.5, out.data(), z.size());
  CHECK(out == std::vector<double>{0.5, -0.0, 0.0, -1.5, 0.0});
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!kernels::available(Backend::Avx2)) {
    MESSAGE("AVX2 not available on this machine; skipping");
    return;
  }
  const auto& s = kernels::table(Backend::Scalar);
  const auto& v = kernels::table(Backend::Avx2);

  // Odd lengths and offsets exercise the tails and unaligned loads.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 15u, 16u, 17u, 31u, 64u, 67u, 1000u}) {
    for (std::size_t offset : {0u, 1u}) {
      CAPTURE(n);
      CAPTURE(offset);
      const auto a = random_buffer(n + offset, 10 + n);
      const auto b = random_buffer(n + offset, 20 + n);
      const double* pa = a.data() + offset;
      const double* pb = b.data() + offset;

      const double ds = s.dot(pa, pb, n), dv = v.dot(pa, pb, n);
      CHECK(std::abs(ds - dv) <= 1e-13 * (1.0 + std::abs(ds)) * std::sqrt(static_cast<double>(n) + 1));
      const double as = s.asum(pa, n), av = v.asum(pa, n);
      CHECK(std::abs(as - av) <= 1e-13 * (1.0 + as));

      std::vector<double> ys(b.begin() + offset, b.end()), yv = ys;
      s.axpy(0.37, pa, ys.data(), n);
      v.axpy(0.37, pa, yv.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-15 * (1.0 + std::abs(ys[i])));

      for (double theta : {0.0, 0.3, 5.0}) {
        std::vector<double> ts(n), tv(n);
        s.soft_threshold(pa, theta, ts.data(), n);
        v.soft_threshold(pa, theta, tv.data(), n);
        CHECK(same_bits(ts, tv));
      }
    }
  }

  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 5}, {4, 16}, {7, 9}, {33, 70}, {64, 128}}) {
    CAPTURE(rows);
    CAPTURE(cols);
    const auto m = random_buffer(rows * cols, rows * 1000 + cols);
    const auto x = random_buffer(cols, 5);
    const auto r = random_buffer(rows, 6);
    std::vector<double> ys(rows), yv(rows), ts(cols), tv(cols);
    s.gemv(m.data(), rows, cols, x.data(), ys.data());
    v.gemv(m.data(), rows, cols, x.data(), yv.data());
    s.gemv_t(m.data(), rows, cols, r.data(), ts.data());
    v.gemv_t(m.data(), rows, cols, r.data(), tv.data());
    const double tol = 1e-13 * std::sqrt(static_cast<double>(std::max(rows, cols)));
    for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(ys[i] - yv[i]) <= tol * (1.0 + std::abs(ys[i])));
    for (std::size_t j = 0; j < cols; ++j) CHECK(std::abs(ts[j] - tv[j]) <= tol * (1.0 + std::abs(ts[j])));
  }
}

TEST_CASE("soft threshold may run in place") {
  for (Backend b : {Backend::Scalar, Backend::Avx2}) {
    if (!kernels::available(b)) continue;
    auto z = random_buffer(37, 9);
    const auto ref = z;
    std::vector<double> expect(z.size());
    kernels::table(Backend::Scalar).soft_threshold(ref.data(), 0.4, expect.data(), ref.size());
    kernels::table(b).soft_threshold(z.data(), 0.4, z.data(), z.size());
    CHECK(same_bits(z, expect));
  }
}
