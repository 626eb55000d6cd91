#include <atomic>
#include <cmath>

#include "paracons/kernels.hpp"

namespace paracons::kernels {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_neon() {
#if defined(__aarch64__) || defined(_M_ARM64)
  return true;  // Advanced SIMD is mandatory on AArch64.
#else
  return false;
#endif
}

Isa detect() {
  if (cpu_has_avx2()) return Isa::kAvx2;
  if (cpu_has_neon()) return Isa::kNeon;
  return Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2: return cpu_has_avx2();
    case Isa::kNeon: return cpu_has_neon();
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

double sum(std::span<const double> x) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::sum(x);
    case Isa::kNeon: return neon::sum(x);
    default: return scalar::sum(x);
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::dot(x, y);
    case Isa::kNeon: return neon::dot(x, y);
    default: return scalar::dot(x, y);
  }
}

CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::centered_moments(x, y, mean_x, mean_y);
    case Isa::kNeon: return neon::centered_moments(x, y, mean_x, mean_y);
    default: return scalar::centered_moments(x, y, mean_x, mean_y);
  }
}

std::optional<double> cosine(std::span<const double> x,
                             std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) return std::nullopt;
  const double xx = dot(x, x);
  const double yy = dot(y, y);
  if (xx <= 0.0 || yy <= 0.0) return std::nullopt;
  double c = dot(x, y) / std::sqrt(xx * yy);
  // Rounding can push |c| a hair past 1 for parallel vectors.
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

}  // namespace paracons::kernels
