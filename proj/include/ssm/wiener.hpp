#pragma once

// Wiener-type averages (1/2M) int_{-M}^{M} |ft(xi)|^2 dxi of a Fourier
// transform over a symmetric window, with an explicit quadrature error bound.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "ssm/common.hpp"

namespace ssm::measure {

struct WienerResult {
  double value = 0;
  double error_bound = 0;  // quadrature + transform evaluation error
};

// For a probability measure supported in a set of diameter D the integrand
// |ft|^2 is 2D-Lipschitz, so the trapezoid value is within D*h of the exact
// window average.  Steps coarser than pi/(2D) (a quarter period of the
// fastest oscillation) are rejected.  `ft_error` is a uniform bound on the
// evaluation error of ft itself; |ft| <= 1 turns it into at most
// ft_error*(2 + ft_error) on the square.
template <typename F>
WienerResult wiener_statistic(F&& ft, double M, double quad_step,
                              double support_diameter, double ft_error = 0.0) {
  if (!(M > 0)) throw std::invalid_argument("wiener_statistic: M must be positive");
  if (!(quad_step > 0))
    throw std::invalid_argument("wiener_statistic: quad_step must be positive");
  if (!(support_diameter > 0))
    throw std::invalid_argument("wiener_statistic: support_diameter must be positive");
  if (!(ft_error >= 0))
    throw std::invalid_argument("wiener_statistic: ft_error must be nonnegative");
  const double pi = 3.14159265358979323846;
  const double required = pi / (2.0 * support_diameter);
  if (quad_step > required * (1.0 + 1e-12))
    throw std::invalid_argument(
        "wiener_statistic: quad_step too coarse for this support; required step <= " +
        std::to_string(required));

  const auto nsteps = static_cast<long long>(std::ceil(2.0 * M / quad_step));
  const double h = 2.0 * M / static_cast<double>(nsteps);
  double sum = 0.0;
  for (long long j = 0; j <= nsteps; ++j) {
    const double xi = -M + h * static_cast<double>(j);
    const std::complex<double> v = ft(xi);
    const double sq = v.real() * v.real() + v.imag() * v.imag();
    sum += (j == 0 || j == nsteps) ? 0.5 * sq : sq;
  }
  WienerResult r;
  r.value = sum * h / (2.0 * M);
  r.error_bound = support_diameter * h + ft_error * (2.0 + ft_error);
  return r;
}

// Empirical transform of a finite point set on the line: (1/n) sum exp(i xi y).
inline std::complex<double> line_transform(const double* pts, std::size_t n, double xi) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sr += std::cos(xi * pts[i]);
    si += std::sin(xi * pts[i]);
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {sr * inv, si * inv};
}

// Wiener average of a discrete line sample (all weights equal).
inline WienerResult empirical_wiener(const double* pts, std::size_t n, double M,
                                     double quad_step, double support_diameter) {
  if (n == 0) throw std::invalid_argument("empirical_wiener: empty sample");
  return wiener_statistic([&](double xi) { return line_transform(pts, n, xi); }, M,
                          quad_step, support_diameter);
}

}  // namespace ssm::measure
