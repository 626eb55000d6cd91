#include "paracons/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#define PARACONS_HAVE_NEON 1
#include <arm_neon.h>
#else
#define PARACONS_HAVE_NEON 0
#endif

namespace paracons::kernels::neon {

#if PARACONS_HAVE_NEON

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  const double* p = x.data();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(p + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(p + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += p[i];
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double* a = x.data();
  const double* b = y.data();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y) {
  const std::size_t n = x.size();
  const double* a = x.data();
  const double* b = y.data();
  const float64x2_t mx = vdupq_n_f64(mean_x);
  const float64x2_t my = vdupq_n_f64(mean_y);
  float64x2_t sxx = vdupq_n_f64(0.0);
  float64x2_t syy = vdupq_n_f64(0.0);
  float64x2_t sxy = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(a + i), mx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(b + i), my);
    sxx = vfmaq_f64(sxx, dx, dx);
    syy = vfmaq_f64(syy, dy, dy);
    sxy = vfmaq_f64(sxy, dx, dy);
  }
  CenteredMoments m{vaddvq_f64(sxx), vaddvq_f64(syy), vaddvq_f64(sxy)};
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

}  // namespace paracons::kernels::neon
