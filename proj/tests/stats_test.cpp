#include <cmath>
#include <random>

#include "doctest.h"
#include "tdf/core.hpp"
#include "tdf/stats.hpp"

using namespace tdf;

TEST_SUITE("stats") {
  TEST_CASE("normal cdf at landmark points") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(stats::normal_cdf(1.959963984540054) ==
          doctest::Approx(0.975).epsilon(1e-12));
    CHECK(stats::normal_cdf(-1.959963984540054) ==
          doctest::Approx(0.025).epsilon(1e-12));
    CHECK(stats::normal_cdf(10.0) == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("cdf is monotone and symmetric") {
    for (double x = -6.0; x < 6.0; x += 0.25) {
      CHECK(stats::normal_cdf(x) < stats::normal_cdf(x + 0.25));
      CHECK(stats::normal_cdf(-x) ==
            doctest::Approx(1.0 - stats::normal_cdf(x)).epsilon(1e-14));
    }
  }

  TEST_CASE("quantile at landmark points") {
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(stats::normal_quantile(0.975) ==
          doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(stats::normal_quantile(0.025) ==
          doctest::Approx(-1.959963984540054).epsilon(1e-12));
  }

  TEST_CASE("quantile inverts the cdf across the whole range") {
    // Grid over (0,1) including deep tails.
    for (double p : {1e-12, 1e-9, 1e-6, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9,
                     0.99, 1.0 - 1e-4, 1.0 - 1e-6}) {
      const double x = stats::normal_quantile(p);
      CHECK(stats::normal_cdf(x) == doctest::Approx(p).epsilon(1e-10));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(1e-8, 1.0 - 1e-8);
    for (int i = 0; i < 1000; ++i) {
      const double p = u(rng);
      const double x = stats::normal_quantile(p);
      // Round trip through the cdf lands back on p to near machine accuracy.
      CHECK(std::abs(stats::normal_cdf(x) - p) < 1e-12);
    }
  }

  TEST_CASE("quantile rejects arguments outside the open unit interval") {
    CHECK_THROWS_AS((void)stats::normal_quantile(0.0), ValidationError);
    CHECK_THROWS_AS((void)stats::normal_quantile(1.0), ValidationError);
    CHECK_THROWS_AS((void)stats::normal_quantile(-0.5), ValidationError);
    CHECK_THROWS_AS((void)stats::normal_quantile(2.0), ValidationError);
  }
}
