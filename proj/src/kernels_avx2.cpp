#include "aniso/kernels.hpp"

#ifdef ANISO_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace aniso::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, shuf));
}

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  std::size_t body = (n / 4) * 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    acc = _mm256_fmadd_pd(va, vb, acc);
  }
  double r = hsum(acc);
  for (std::size_t i = body; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum(const double* a, std::size_t n) {
  std::size_t body = (n / 4) * 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  }
  double r = hsum(acc);
  for (std::size_t i = body; i < n; ++i) r += a[i];
  return r;
}

double max_abs(const double* a, std::size_t n) {
  std::size_t body = (n / 4) * 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d v = _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask);
    acc = _mm256_max_pd(acc, v);
  }
  double r = hmax(acc);
  for (std::size_t i = body; i < n; ++i) r = std::max(r, std::abs(a[i]));
  return r;
}

void max_inplace(double* dst, const double* src, std::size_t n) {
  std::size_t body = (n / 4) * 4;
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_max_pd(d, s));
  }
  for (std::size_t i = body; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  std::size_t body = (n / 4) * 4;
  __m256d va = _mm256_set1_pd(alpha);
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, vx, vy));
  }
  for (std::size_t i = body; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace aniso::kernels::avx2

#endif  // ANISO_HAVE_AVX2_BUILD
