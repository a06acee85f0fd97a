#pragma once

#include <stdexcept>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/pisot.hpp"
#include "ssm/polynomial.hpp"

namespace ssm::algebraic {

// Exact integer power sums s_n = sum over roots of root^n, by Newton seeding
// and the companion recurrence. Backward sums (n < 0) come from the reciprocal
// polynomial and exist only when |c_0| = 1. Fully precomputed: immutable.
class PowerSumSequence {
 public:
  explicit PowerSumSequence(const MonicIntPolynomial& poly, int cap = 1100)
      : poly_(poly), cap_(cap) {
    if (cap < 1) throw std::invalid_argument("power sums: cap must be positive");
    fwd_ = compute(poly_, cap_);
    if (poly_.coeff(0) == 1 || poly_.coeff(0) == -1)
      bwd_ = compute(poly_.reciprocal(), cap_);
  }

  const MonicIntPolynomial& poly() const { return poly_; }
  int cap() const { return cap_; }
  bool has_backward() const { return !bwd_.empty(); }

  BigInt at(long long n) const {
    if (n >= 0) {
      if (n > cap_) throw std::domain_error("power sums: index beyond precomputed range");
      return fwd_[static_cast<std::size_t>(n)];
    }
    if (bwd_.empty())
      throw std::domain_error("power sums: negative index needs constant term 1 or -1");
    if (-n > cap_) throw std::domain_error("power sums: index beyond precomputed range");
    return bwd_[static_cast<std::size_t>(-n)];
  }

 private:
  static std::vector<BigInt> compute(const MonicIntPolynomial& p, int cap) {
    const int d = p.degree();
    std::vector<BigInt> s(static_cast<std::size_t>(cap) + 1);
    s[0] = d;
    for (int n = 1; n <= cap; ++n) {
      BigInt acc = 0;
      if (n < d) {
        acc = -BigInt(n) * p.coeff(d - n);
        for (int i = 1; i < n; ++i) acc -= p.coeff(d - i) * s[static_cast<std::size_t>(n - i)];
      } else {
        for (int i = 1; i <= d; ++i) acc -= p.coeff(d - i) * s[static_cast<std::size_t>(n - i)];
      }
      s[static_cast<std::size_t>(n)] = acc;
    }
    return s;
  }

  MonicIntPolynomial poly_;
  int cap_;
  std::vector<BigInt> fwd_;
  std::vector<BigInt> bwd_;
};

inline BigInt power_sum(const PowerSumSequence& seq, long long n) { return seq.at(n); }

struct DistResult {
  Real distance;   // dist(2 Re theta^n, Z)
  BigInt nearest;  // the integer attaining it
  Real error;      // certified bound on |computed - true| from the root radii
};

namespace detail {

inline HComplex pow_by_squaring(HComplex base, unsigned long long e) {
  HComplex acc(Real(1), Real(0));
  while (e) {
    if (e & 1ull) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace detail

// dist(2 Re theta^n, Z) with exact nearest integer. Forward indices subtract
// the non-dominant conjugate contribution from the exact integer s_n;
// backward indices power lambda directly (the reciprocal root sums are
// dominated by the reciprocal of the small real conjugate, so they are not
// usable for this). Raises a precision error when the nearest integer is
// ambiguous at the context's precision.
inline DistResult dist_2Re_theta_pow_to_Z(const PisotContext& ctx, const PowerSumSequence& seq,
                                          long long n) {
  const Real thr = precision_threshold(ctx.precision_digits());
  Real value_for_frac;  // nearest = base_int - round(value_for_frac)
  BigInt base_int = 0;  // exact integer part contributed by power sums
  Real err(0);

  if (n >= 0) {
    // 2 Re theta^n = s_n - v, v = sum over the other conjugates
    HComplex v(Real(0), Real(0));
    for (std::size_t idx : ctx.other_root_indices()) {
      const auto& box = ctx.roots()[idx];
      v += detail::pow_by_squaring(box.center, static_cast<unsigned long long>(n));
      if (n > 0) {
        const Real m = abs(box.center) + box.radius;
        err += Real(n) * pow(m, static_cast<int>(n - 1)) * box.radius;
      }
    }
    err += abs(v.imag());  // exact v is real; drop the certified-small residue
    value_for_frac = v.real();
    base_int = seq.at(n);
  } else {
    if (ctx.poly().coeff(0) != 1 && ctx.poly().coeff(0) != -1)
      throw std::domain_error("dist: negative index needs constant term 1 or -1");
    const auto& box = ctx.theta_box();
    const HComplex lam = ctx.lambda();
    const unsigned long long m = static_cast<unsigned long long>(-n);
    const HComplex p = detail::pow_by_squaring(lam, m);
    // |lambda|'s certified relative error mirrors theta's
    const Real rel = box.radius / (abs(box.center) - box.radius);
    err = 2 * abs(p) * (pow(1 + rel, static_cast<int>(m)) - 1);
    value_for_frac = -2 * p.real();
    base_int = 0;
  }

  const FracDecomp fd = frac_centered(value_for_frac);
  if (Real(0.5) - abs(fd.frac) <= err + thr)
    throw PrecisionError("dist: value too close to a half-integer to round");
  DistResult out;
  out.distance = abs(fd.frac);
  out.nearest = base_int - fd.integer;
  out.error = err;
  return out;
}

}  // namespace ssm::algebraic
