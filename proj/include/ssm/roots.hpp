#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/polynomial.hpp"

namespace ssm::algebraic {

struct RootBox {
  HComplex center;
  Real radius;  // certified: the disk contains exactly one root
};

namespace detail {

struct EvalPoly {
  std::vector<HComplex> coeffs;   // degree-first Horner order, leading included
  std::vector<HComplex> dcoeffs;

  explicit EvalPoly(const MonicIntPolynomial& p) {
    const int d = p.degree();
    coeffs.reserve(static_cast<std::size_t>(d) + 1);
    for (int i = d; i >= 0; --i) coeffs.emplace_back(Real(p.coeff(i)), Real(0));
    dcoeffs.reserve(static_cast<std::size_t>(d));
    for (int i = d; i >= 1; --i) dcoeffs.emplace_back(Real(i * p.coeff(i)), Real(0));
  }

  HComplex eval(const HComplex& z) const {
    HComplex acc = coeffs[0];
    for (std::size_t i = 1; i < coeffs.size(); ++i) acc = acc * z + coeffs[i];
    return acc;
  }

  HComplex eval_derivative(const HComplex& z) const {
    HComplex acc = dcoeffs[0];
    for (std::size_t i = 1; i < dcoeffs.size(); ++i) acc = acc * z + dcoeffs[i];
    return acc;
  }
};

// |p(z)/p'(z)| * degree: a disk of this radius about z contains at least one
// root (from p'/p = sum 1/(z - r_j)); with pairwise disjoint disks and d roots
// total, each disk contains exactly one.
inline Real inclusion_radius(const EvalPoly& ep, const HComplex& z, int degree) {
  const HComplex pv = ep.eval(z);
  const HComplex dv = ep.eval_derivative(z);
  if (abs(dv) == 0) return Real(1e30);
  return Real(degree) * abs(pv) / abs(dv);
}

inline bool disks_disjoint(const std::vector<HComplex>& z, const std::vector<Real>& r) {
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (abs(z[i] - z[j]) <= r[i] + r[j]) return false;
  return true;
}

}  // namespace detail

// Simultaneous (Aberth-Ehrlich) iteration with a-posteriori inclusion radii.
// Stops at the first iterate whose certified radii meet the requested target,
// so a higher precision_digits request yields radii at least as small.
inline std::vector<RootBox> find_roots(const MonicIntPolynomial& poly, int precision_digits,
                                       int max_iters = 200) {
  if (precision_digits < 1 || precision_digits > 200)
    throw std::invalid_argument("find_roots: precision_digits out of range [1, 200]");
  if (!poly.is_square_free())
    throw std::domain_error("find_roots: polynomial is not square-free");

  const int d = poly.degree();
  const detail::EvalPoly ep(poly);
  const Real target = precision_threshold(precision_digits) / 2;

  Real cauchy(1);
  for (int i = 0; i < d; ++i) {
    Real m = abs(Real(poly.coeff(i)));
    if (1 + m > cauchy) cauchy = 1 + m;
  }

  std::vector<HComplex> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const Real angle = real_two_pi() * (Real(i) + Real(1) / 2) / d + Real(2) / 5;
    z[static_cast<std::size_t>(i)] = HComplex(cauchy * cos(angle), cauchy * sin(angle));
  }

  std::vector<Real> radii(static_cast<std::size_t>(d), Real(1e30));
  Real achieved(1e30);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<HComplex> w(static_cast<std::size_t>(d));
    bool all_small = true;
    achieved = 0;
    for (int i = 0; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      HComplex dv = ep.eval_derivative(z[ui]);
      if (abs(dv) == 0) {
        z[ui] += HComplex(Real(1) / 1000000000, Real(1) / 1000000000);
        dv = ep.eval_derivative(z[ui]);
      }
      w[ui] = ep.eval(z[ui]) / dv;
      radii[ui] = Real(d) * abs(w[ui]);
      if (radii[ui] > achieved) achieved = radii[ui];
      if (radii[ui] > target) all_small = false;
    }
    if (all_small && detail::disks_disjoint(z, radii)) {
      std::vector<RootBox> out;
      out.reserve(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        out.push_back({z[static_cast<std::size_t>(i)], radii[static_cast<std::size_t>(i)]});
      // dominant-first deterministic order: modulus descending, imaginary part
      // descending on certified ties, then real part.
      std::sort(out.begin(), out.end(), [](const RootBox& a, const RootBox& b) {
        const Real ma = abs(a.center), mb = abs(b.center);
        if (ma > mb + a.radius + b.radius) return true;
        if (mb > ma + a.radius + b.radius) return false;
        if (a.center.imag() != b.center.imag()) return a.center.imag() > b.center.imag();
        return a.center.real() < b.center.real();
      });
      return out;
    }
    for (int i = 0; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      HComplex s(Real(0), Real(0));
      for (int j = 0; j < d; ++j)
        if (j != i) s += HComplex(Real(1), Real(0)) / (z[ui] - z[static_cast<std::size_t>(j)]);
      const HComplex denom = HComplex(Real(1), Real(0)) - w[ui] * s;
      if (abs(denom) == 0)
        z[ui] -= w[ui];
      else
        z[ui] -= w[ui] / denom;
    }
  }
  std::ostringstream msg;
  msg << "find_roots: no certified radii <= 10^-" << precision_digits << " after " << max_iters
      << " iterations; achieved radius " << achieved.convert_to<double>();
  throw PrecisionError(msg.str());
}

}  // namespace ssm::algebraic
