#include <stdexcept>

#include "doctest.h"
#include "paracons/metrics.hpp"

using namespace paracons;

TEST_SUITE("statistics") {
  TEST_CASE("population mean and std") {
    const std::vector<double> v{0.6, 0.8};
    const auto m = mean_std(std::span<const double>(v));
    REQUIRE(m);
    CHECK(m->mean == doctest::Approx(0.7));
    CHECK(m->std == doctest::Approx(0.1));
    CHECK(m->n == 2);

    const std::vector<double> one{0.42};
    CHECK(mean_std(std::span<const double>(one))->std == 0.0);
    CHECK_FALSE(mean_std(std::span<const double>()).has_value());
  }

  TEST_CASE("absent values are skipped") {
    const std::vector<std::optional<double>> v{0.2, std::nullopt, 0.4};
    const auto m = mean_std(std::span<const std::optional<double>>(v));
    CHECK(m->n == 2);
    CHECK(m->mean == doctest::Approx(0.3));
    const std::vector<std::optional<double>> none{std::nullopt};
    CHECK_FALSE(mean_std(std::span<const std::optional<double>>(none)).has_value());
  }

  TEST_CASE("pearson on exact linear relations") {
    std::vector<double> x, y, z;
    for (int i = 0; i < 50; ++i) {
      x.push_back(i * 0.37 - 3.0);
      y.push_back(2.0 * x.back() + 1.0);
      z.push_back(-x.back());
    }
    CHECK(*pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*pearson(x, z) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("pearson on a small fixture") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 4, 5, 4, 5};
    // Sxy = 6, Sxx = 10, Syy = 6 -> r = 6 / sqrt(60).
    CHECK(*pearson(x, y) == doctest::Approx(6.0 / std::sqrt(60.0)).epsilon(1e-12));
  }

  TEST_CASE("pearson degenerate inputs") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> c{0.1, 0.1, 0.1};
    CHECK_FALSE(pearson(x, c).has_value());
    CHECK_FALSE(pearson(c, x).has_value());
    const std::vector<double> one{1};
    CHECK_FALSE(pearson(one, one).has_value());
    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS(pearson(x, two), std::invalid_argument);
  }

  TEST_CASE("pearson stays within bounds") {
    std::vector<double> x, y;
    for (int i = 0; i < 1000; ++i) {
      x.push_back(1e8 + i);
      y.push_back(1e8 + i);
    }
    const auto r = pearson(x, y);
    REQUIRE(r);
    CHECK(*r <= 1.0);
    CHECK(*r == doctest::Approx(1.0));
  }
}
