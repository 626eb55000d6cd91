#include "paracons/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PARACONS_HAVE_AVX2 1
#include <immintrin.h>
#else
#define PARACONS_HAVE_AVX2 0
#endif

namespace paracons::kernels::avx2 {

#if PARACONS_HAVE_AVX2

#define PARACONS_AVX2 __attribute__((target("avx2,fma")))

namespace {

PARACONS_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

PARACONS_AVX2 double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  const double* p = x.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += p[i];
  return s;
}

PARACONS_AVX2 double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double* a = x.data();
  const double* b = y.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

PARACONS_AVX2 CenteredMoments centered_moments(std::span<const double> x,
                                                std::span<const double> y,
                                                double mean_x, double mean_y) {
  const std::size_t n = x.size();
  const double* a = x.data();
  const double* b = y.data();
  const __m256d mx = _mm256_set1_pd(mean_x);
  const __m256d my = _mm256_set1_pd(mean_y);
  __m256d sxx = _mm256_setzero_pd();
  __m256d syy = _mm256_setzero_pd();
  __m256d sxy = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(a + i), mx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(b + i), my);
    sxx = _mm256_fmadd_pd(dx, dx, sxx);
    syy = _mm256_fmadd_pd(dy, dy, syy);
    sxy = _mm256_fmadd_pd(dx, dy, sxy);
  }
  CenteredMoments m{hsum(sxx), hsum(syy), hsum(sxy)};
  for (; i < n; ++i) {
    const double dx = a[i] - mean_x;
    const double dy = b[i] - mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

#else

double sum(std::span<const double> x) { return scalar::sum(x); }
double dot(std::span<const double> x, std::span<const double> y) {
  return scalar::dot(x, y);
}
CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y) {
  return scalar::centered_moments(x, y, mean_x, mean_y);
}

#endif

}  // namespace paracons::kernels::avx2
