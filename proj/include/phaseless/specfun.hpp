#pragma once

#include <complex>

namespace phaseless::specfun {

// Real-argument Bessel and Hankel functions of order 0, 1 and 2.
//
// Small arguments use the ascending series evaluated in extended precision,
// large arguments the Hankel asymptotic expansion. The crossover sits where
// the asymptotic series can still be truncated below 1e-15 and the ascending
// series has lost fewer than four of its long double digits.
//
// All functions throw std::domain_error for x <= 0, non-finite x or an order
// outside {0, 1, 2}. Results are always finite: the logarithmic and pole
// singularities of Y_n at the origin saturate at -DBL_MAX.

inline constexpr double kSeriesThreshold = 17.0;

double bessel_j(int n, double x);
double bessel_y(int n, double x);
std::complex<double> hankel1(int n, double x);

// H_0^{(1)}(x) and H_1^{(1)}(x) computed together; this is the pair every
// Green's tensor evaluation needs.
struct HankelPair {
  std::complex<double> h0;
  std::complex<double> h1;
};
HankelPair hankel01(double x);

}  // namespace phaseless::specfun
