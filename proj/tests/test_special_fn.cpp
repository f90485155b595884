#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fso/special_fn.hpp"
#include "test_support.hpp"

using fso::testing::erfc_oracle;

TEST_CASE("erfc reference values") {
  CHECK(fso::erfc(0.0) == 1.0);
  CHECK(fso::erfc(1.0) == doctest::Approx(0.15729920705).epsilon(1e-10));
  CHECK(fso::erfc(-1.0) == doctest::Approx(1.84270079295).epsilon(1e-10));
  // Frozen from the long-double oracle.
  CHECK(static_cast<double>(erfc_oracle(1.0L)) == doctest::Approx(0.157299207050285).epsilon(1e-14));
}

TEST_CASE("erfc matches the series/continued-fraction oracle to 1e-12") {
  for (double z = -6.0; z <= 26.0; z += 0.01) {
    const double expected = static_cast<double>(erfc_oracle(z));
    const double got = fso::erfc(z);
    REQUIRE_MESSAGE(std::abs(got / expected - 1.0) <= 1e-12, "z = " << z);
    REQUIRE(std::abs(fso::erfc(z) + fso::erfc(-z) - 2.0) <= 1e-12);
  }
}

TEST_CASE("log_erfc is continuous across the asymptotic switch and finite far out") {
  for (double z : {25.0, 25.0 + 1e-9, 26.0}) {
    CHECK(fso::log_erfc(z) == doctest::Approx(std::log(static_cast<double>(erfc_oracle(z)))).epsilon(1e-14));
  }
  CHECK(fso::log_erfc(24.0) == doctest::Approx(std::log(static_cast<double>(erfc_oracle(24.0L)))).epsilon(1e-13));
  CHECK(std::isfinite(fso::log_erfc(1e3)));
  CHECK(fso::log_erfc(-40.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("non-finite arguments are domain errors") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fso::erfc(nan), std::domain_error);
  CHECK_THROWS_AS(fso::erfc(inf), std::domain_error);
  CHECK_THROWS_AS(fso::erfc_approx(-inf), std::domain_error);
}

TEST_CASE("erfc_approx branch values") {
  CHECK(fso::erfc_approx(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fso::erfc_approx(1.0) == doctest::Approx(0.165537).epsilon(1e-5));
  // 1 + tanh(pi / sqrt 6), evaluated independently.
  CHECK(fso::erfc_approx(-1.0) == doctest::Approx(1.8571627939933577).epsilon(1e-14));
  CHECK(fso::erfc_approx(-1.0) == doctest::Approx(1.0 + std::tanh(std::numbers::pi / std::sqrt(6.0))));
  CHECK(fso::erfc_branch(0.0) == fso::ErfcBranch::NonNegative);
  CHECK(fso::erfc_branch(-1e-300) == fso::ErfcBranch::Negative);
}

TEST_CASE("negative branch equals the printed exponential form where that form is safe") {
  for (double z = -50.0; z < 0.0; z += 0.37) {
    const double e = std::exp(-2.0 * std::numbers::pi * z / std::sqrt(6.0));
    CHECK(fso::erfc_approx(z) == doctest::Approx(1.0 + (e - 1.0) / (e + 1.0)).epsilon(1e-14));
  }
  // The printed form overflows here; the tanh form saturates.
  CHECK(fso::erfc_approx(-400.0) == 2.0);
}

TEST_CASE("erfc_approx invariants") {
  for (double z = 0.0; z <= 10.0; z += 1e-3) {
    REQUIRE(fso::erfc_approx(z) >= fso::erfc(z));
  }
  // Outside roughly [-14, 27] the value rounds to 2 or underflows to 0.
  for (double z = -10.0; z <= 10.0; z += 1e-3) {
    const double a = fso::erfc_approx(z);
    REQUIRE(a > 0.0);
    REQUIRE(a < 2.0);
  }
  // Both underflow past z ~ 27, so compare in the log domain.
  for (double z = 40.0; z <= 100.0; z += 0.5) {
    REQUIRE(std::abs(std::expm1(fso::log_erfc_approx(z) - fso::log_erfc(z))) <= 1e-3);
  }
  // The logistic branch approaches 2 as 2 / (1 + exp(2 pi |z| / sqrt 6)),
  // which is still ~2e-5 short at z = -4.5 and drops below 1e-9 near -8.35.
  for (double z = -10.0; z <= -4.5; z += 0.01) {
    const double gap = 2.0 / (1.0 + std::exp(-2.0 * std::numbers::pi * z / std::sqrt(6.0)));
    REQUIRE(std::abs(2.0 - fso::erfc_approx(z) - gap) <= 1e-6 * gap + 1e-15);
    REQUIRE(std::abs(fso::erfc(z) - 2.0) <= 1e-9);
  }
  CHECK(std::abs(fso::erfc_approx(-1e-12) - fso::erfc_approx(1e-12)) < 1e-11);
}

TEST_CASE("erfc is strictly decreasing") {
  double last = fso::erfc(-5.0);
  for (double z = -4.99; z <= 26.0; z += 0.01) {
    const double now = fso::erfc(z);
    REQUIRE(now < last);
    last = now;
  }
}
