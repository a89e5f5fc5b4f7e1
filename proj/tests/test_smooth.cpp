#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "outlift/smooth.hpp"

#include <cmath>
#include <stdexcept>

using namespace outlift;

TEST_CASE("smooth_step clamps exactly outside the unit interval") {
  for (double u : {-2.0, -1e-300, 0.0}) {
    CHECK(smooth_step(u) == 0.0);
    CHECK(smooth_step_deriv(u) == 0.0);
  }
  for (double u : {1.0, 1.0 + 1e-16, 50.0}) {
    CHECK(smooth_step(u) == 1.0);
    CHECK(smooth_step_deriv(u) == 0.0);
  }
}

TEST_CASE("smooth_step is a symmetric monotone ramp") {
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double u = k / 1000.0;
    const double v = smooth_step(u);
    CHECK(v >= prev);
    // strictly increasing away from the saturated tails (exp underflow below
    // u ~ 0.0014, rounding to 1.0 above u ~ 0.974)
    if (k >= 2 && k <= 960) CHECK(v > prev);
    CHECK(std::abs(v + smooth_step(1.0 - u) - 1.0) <= 1e-15);
    prev = v;
  }
}

TEST_CASE("smooth_step_deriv matches finite differences") {
  const double h = 1e-5;
  for (int steep : {1, 3}) {
    const double k = steep;
    double worst = 0.0;
    for (int m = 1; m < 1000; ++m) {
      const double u = m / 1000.0;
      const double fd = (smooth_step(u + h, k) - smooth_step(u - h, k)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - smooth_step_deriv(u, k)));
      CHECK(smooth_step_deriv(u, k) >= 0.0);
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("smooth_step_deriv survives the underflow corners") {
  // near the junctions exp(-k/u) underflows; the derivative must flush to 0
  for (double u : {1e-8, 1e-4, 1.0 - 1e-8}) {
    const double d = smooth_step_deriv(u, 200.0);
    CHECK_FALSE(std::isnan(d));
    CHECK(d >= 0.0);
  }
}

TEST_CASE("steepness domain is validated") {
  CHECK_THROWS_AS(smooth_step(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(smooth_step(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(smooth_step(0.5, 200.5), std::invalid_argument);
  CHECK_NOTHROW(smooth_step(0.5, 200.0));
}

TEST_CASE("psi is exactly 1 on the plateau and exactly 0 past the support") {
  const BumpProfile p{};
  for (int k = 0; k <= 300; ++k) {
    const double r = p.plateau_end * k / 300.0;
    CHECK(psi(p, r) == 1.0);
    CHECK(psi_prime(p, r) == 0.0);
  }
  for (int k = 0; k <= 300; ++k) {
    const double r = p.support_end + 2.0 * k / 300.0;
    CHECK(psi(p, r) == 0.0);
    CHECK(psi_prime(p, r) == 0.0);
  }
}

TEST_CASE("psi decreases monotonically with nonpositive slope") {
  const BumpProfile p{0.25, 0.7, 2.0};
  double prev = 1.0;
  for (int k = 0; k <= 2000; ++k) {
    const double r = 0.8 * k / 2000.0;
    const double v = psi(p, r);
    CHECK(v <= prev + 1e-18);
    CHECK(psi_prime(p, r) <= 0.0);
    prev = v;
  }
}

TEST_CASE("psi_prime matches finite differences") {
  const BumpProfile p{};
  const double h = 1e-5;
  double worst = 0.0;
  for (int m = 1; m < 1000; ++m) {
    const double r = m / 1000.0;
    const double fd = (psi(p, r + h) - psi(p, r - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - psi_prime(p, r)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("psi rejects negative radii and bad profiles") {
  const BumpProfile p{};
  CHECK_THROWS_AS(psi(p, -1e-12), std::invalid_argument);
  CHECK_THROWS_AS(psi_prime(p, -0.5), std::invalid_argument);

  CHECK_THROWS_AS((BumpProfile{0.0, 0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BumpProfile{0.5, 0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BumpProfile{0.6, 0.4, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BumpProfile{0.3, 0.6, 0.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW(BumpProfile{}.validate());
}

TEST_CASE("eta ramps from exact 0 to exact 1") {
  const StepProfile p{};
  for (double s : {-1.0, 0.0, 0.1, p.ramp_start}) {
    CHECK(eta(p, s) == 0.0);
    CHECK(eta_prime(p, s) == 0.0);
  }
  for (double s : {p.ramp_end, 0.9, 1.0, 7.5}) {
    CHECK(eta(p, s) == 1.0);
    CHECK(eta_prime(p, s) == 0.0);
  }
  double prev = -1.0;
  for (int k = 0; k <= 500; ++k) {
    const double s = k / 500.0;
    const double v = eta(p, s);
    CHECK(v >= prev);
    CHECK(eta_prime(p, s) >= 0.0);
    prev = v;
  }

  const double h = 1e-5;
  double worst = 0.0;
  for (int m = 1; m < 500; ++m) {
    const double s = m / 500.0;
    const double fd = (eta(p, s + h) - eta(p, s - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - eta_prime(p, s)));
  }
  CHECK(worst <= 1e-6);

  CHECK_THROWS_AS((StepProfile{0.8, 0.2, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StepProfile{-0.1, 0.8, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((StepProfile{0.2, 1.2, 1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW(StepProfile{}.validate());
}
