// AVX2+FMA variants. Functions carry a target attribute instead of the whole
// translation unit being built with -mavx2, so nothing here can leak AVX
// instructions into code that runs on older CPUs.

#include "kernels_impl.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define BPINV_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

namespace bpinv::kernels::detail {

#ifdef BPINV_HAVE_AVX2_TU
namespace {

#define BPINV_AVX2 __attribute__((target("avx2,fma")))

BPINV_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

BPINV_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

BPINV_AVX2 double asum_avx2(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_add_pd(s0, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    s1 = _mm256_add_pd(s1, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i + 4)));
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i] < 0.0 ? -x[i] : x[i];
  return s;
}

BPINV_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// Four rows share each load of x.
BPINV_AVX2 void gemv_avx2(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* r0 = m + r * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      const __m256d xv = _mm256_loadu_pd(x + c);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + c), xv, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + c), xv, s1);
      s2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + c), xv, s2);
      s3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + c), xv, s3);
    }
    double t0 = hsum(s0), t1 = hsum(s1), t2 = hsum(s2), t3 = hsum(s3);
    for (; c < cols; ++c) {
      t0 += r0[c] * x[c];
      t1 += r1[c] * x[c];
      t2 += r2[c] * x[c];
      t3 += r3[c] * x[c];
    }
    y[r] = t0;
    y[r + 1] = t1;
    y[r + 2] = t2;
    y[r + 3] = t3;
  }
  for (; r < rows; ++r) y[r] = dot_avx2(m + r * cols, x, cols);
}

BPINV_AVX2 void gemv_t_avx2(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
  std::size_t r = 0;
  for (; r + 4 <= rows; r += 4) {
    const double* r0 = m + r * cols;
    const double* r1 = r0 + cols;
    const double* r2 = r1 + cols;
    const double* r3 = r2 + cols;
    const __m256d a0 = _mm256_set1_pd(x[r]);
    const __m256d a1 = _mm256_set1_pd(x[r + 1]);
    const __m256d a2 = _mm256_set1_pd(x[r + 2]);
    const __m256d a3 = _mm256_set1_pd(x[r + 3]);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d acc = _mm256_loadu_pd(y + c);
      acc = _mm256_fmadd_pd(a0, _mm256_loadu_pd(r0 + c), acc);
      acc = _mm256_fmadd_pd(a1, _mm256_loadu_pd(r1 + c), acc);
      acc = _mm256_fmadd_pd(a2, _mm256_loadu_pd(r2 + c), acc);
      acc = _mm256_fmadd_pd(a3, _mm256_loadu_pd(r3 + c), acc);
      _mm256_storeu_pd(y + c, acc);
    }
    for (; c < cols; ++c) {
      y[c] += x[r] * r0[c];
      y[c] += x[r + 1] * r1[c];
      y[c] += x[r + 2] * r2[c];
      y[c] += x[r + 3] * r3[c];
    }
  }
  for (; r < rows; ++r) axpy_avx2(x[r], m + r * cols, y, cols);
}

BPINV_AVX2 void soft_threshold_avx2(const double* z, double theta, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d th = _mm256_set1_pd(theta);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(z + i);
    const __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(sign, v), th), zero);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(sign, v)));
  }
  for (; i < n; ++i) {
    const double v = z[i];
    double mag = (v < 0.0 ? -v : v) - theta;
    if (!(mag > 0.0)) mag = 0.0;
    out[i] = __builtin_copysign(mag, v);
  }
}

#undef BPINV_AVX2

constexpr KernelTable kAvx2{
    Backend::Avx2, dot_avx2, asum_avx2, axpy_avx2, gemv_avx2, gemv_t_avx2, soft_threshold_avx2,
};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }

#else

const KernelTable* avx2_table() noexcept { return nullptr; }

#endif

}  // namespace bpinv::kernels::detail
