#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "phaseless/specfun.hpp"

using namespace phaseless::specfun;

namespace {

constexpr long double kEuler = 0.577215664901532860606512090082402431L;

// Ascending series in long double, summed until the terms stop mattering.
long double series_j(int n, long double x) {
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= x / (2.0L * k);
  long double sum = 0.0L;
  const long double q = -x * x / 4.0L;
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= q / ((k + 1.0L) * (k + 1.0L + n));
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  return sum;
}

// Y_0 from its logarithmic series.
long double series_y0(long double x) {
  long double h = 0.0L;
  long double term = 1.0L;
  long double sum = 0.0L;
  const long double q = -x * x / 4.0L;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    h += 1.0L / k;
    sum += term * h;
  }
  return (2.0L / static_cast<long double>(M_PI)) * ((std::log(x / 2.0L) + kEuler) * series_j(0, x) - sum);
}

// Absolute error scaled by the oscillation envelope sqrt(2 / (pi x)).
double envelope(double x) { return std::min(1.0, std::sqrt(2.0 / (M_PI * x))); }

}  // namespace

TEST_CASE("bessel_j limits at the origin") {
  CHECK(bessel_j(0, 1e-12) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(bessel_j(1, 1e-12)) < 1e-12);
  CHECK(std::fabs(bessel_j(2, 1e-12)) < 1e-20);
}

TEST_CASE("bessel_j matches the long double series oracle") {
  for (int n = 0; n <= 2; ++n) {
    for (double x = 0.05; x <= 10.0; x += 0.137) {
      const double ref = static_cast<double>(series_j(n, x));
      CHECK(std::fabs(bessel_j(n, x) - ref) <= 1e-13 * envelope(x));
    }
  }
  CHECK(bessel_j(0, 1.0) == doctest::Approx(static_cast<double>(series_j(0, 1.0L))).epsilon(1e-15));
}

// Both implementations carry an argument error of order x eps at large x.
TEST_CASE("bessel_j and bessel_y agree with the standard library") {
  for (int n = 0; n <= 2; ++n) {
    for (double x = 0.3; x < 400.0; x *= 1.07) {
      CHECK(std::fabs(bessel_j(n, x) - std::cyl_bessel_j(static_cast<double>(n), x)) <= 2e-12 * envelope(x));
      CHECK(std::fabs(bessel_y(n, x) - std::cyl_neumann(static_cast<double>(n), x)) <=
            2e-12 * std::max(envelope(x), std::fabs(std::cyl_neumann(static_cast<double>(n), x))));
    }
  }
}

TEST_CASE("bessel_y against the logarithmic series and the Wronskian") {
  CHECK(bessel_y(0, 1.0) == doctest::Approx(static_cast<double>(series_y0(1.0L))).epsilon(1e-14));
  for (double x = 0.1; x < 8.0; x += 0.31) {
    CHECK(std::fabs(bessel_y(0, x) - static_cast<double>(series_y0(x))) <= 1e-13 * std::max(1.0, std::fabs(bessel_y(0, x))));
  }
  for (double x : {0.01, 0.5, 2.0, 16.9, 17.1, 30.0, 250.0}) {
    const double w = bessel_j(1, x) * bessel_y(0, x) - bessel_j(0, x) * bessel_y(1, x);
    CHECK(w == doctest::Approx(2.0 / (M_PI * x)).epsilon(1e-12));
  }
}

TEST_CASE("bessel_y saturates at the origin") {
  const double y = bessel_y(0, 1e-300);
  CHECK(std::isfinite(y));
  CHECK(y < -100.0);
  CHECK(bessel_y(1, 1e-310) == -DBL_MAX);
}

TEST_CASE("hankel1 recurrence, asymptotics and singularity") {
  const double x = 1.0;
  const auto lhs = hankel1(2, x);
  const auto rhs = (2.0 / x) * hankel1(1, x) - hankel1(0, x);
  CHECK(std::abs(lhs - rhs) < 1e-14);
  CHECK(std::abs(hankel1(0, 500.0)) == doctest::Approx(std::sqrt(2.0 / (M_PI * 500.0))).epsilon(0.01));
  CHECK(hankel1(0, 1e-200).imag() < -100.0);
  for (double t : {0.2, 5.0, 16.99, 17.0, 17.01, 60.0}) {
    const HankelPair p = hankel01(t);
    CHECK(std::abs(p.h0 - hankel1(0, t)) == 0.0);
    CHECK(std::abs(p.h1 - hankel1(1, t)) == 0.0);
  }
}

TEST_CASE("continuity across the series and asymptotic crossover") {
  for (int n = 0; n <= 2; ++n) {
    const double below = std::nextafter(kSeriesThreshold, 0.0);
    const double above = std::nextafter(kSeriesThreshold, 100.0);
    CHECK(std::fabs(bessel_j(n, below) - bessel_j(n, above)) < 1e-13);
    CHECK(std::fabs(bessel_y(n, below) - bessel_y(n, above)) < 1e-13);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_j(0, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_j(0, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_y(3, 1.0), std::domain_error);
  CHECK_THROWS_AS(hankel1(0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(hankel1(1, INFINITY), std::domain_error);
}
