#pragma once

// Numeric inner loops used by the analysis code: dot products for embedding
// cosine similarity and centered moment sums for Pearson correlation.
//
// Every kernel has a scalar reference implementation plus vectorized
// variants. The variant is selected once at runtime from CPU features and can
// be pinned with set_isa() (tests compare every available variant against the
// scalar reference).

#include <optional>
#include <span>
#include <string_view>

namespace paracons::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// True when this binary contains the variant and the CPU can run it.
bool isa_available(Isa isa);

/// Currently dispatched variant.
Isa active_isa();

/// Pins dispatch to `isa`; returns false (and changes nothing) when the
/// variant is unavailable.
bool set_isa(Isa isa);

struct CenteredMoments {
  double sxx = 0.0;  // sum (x - mx)^2
  double syy = 0.0;  // sum (y - my)^2
  double sxy = 0.0;  // sum (x - mx)(y - my)
};

// Dispatched entry points. Spans passed together must have equal sizes.
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y);

/// Cosine similarity; nullopt when either vector has zero norm or the sizes
/// differ.
std::optional<double> cosine(std::span<const double> x,
                             std::span<const double> y);

namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y);
}  // namespace scalar

namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y);
}  // namespace avx2

namespace neon {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
CenteredMoments centered_moments(std::span<const double> x,
                                 std::span<const double> y, double mean_x,
                                 double mean_y);
}  // namespace neon

}  // namespace paracons::kernels
