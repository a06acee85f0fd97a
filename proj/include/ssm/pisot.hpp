#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/polynomial.hpp"
#include "ssm/roots.hpp"

namespace ssm::algebraic {

struct PisotCertificate {
  bool is_complex_pisot = false;
  Real im_margin;                     // |Im theta| - radius (certified nonreal)
  Real dominant_modulus_margin;       // |theta| - 1 - radius
  std::vector<Real> conjugate_margins;  // 1 - |z_j| - r_j for roots beyond the pair
  std::string failure_reason;
};

namespace detail {

// Certify that the unique root inside `box` is real: polish with real Newton,
// bracket a sign change, and check the bracket stays clear of every other
// disk. The bracketed real root then has to be this disk's root.
inline bool certify_real_root(const MonicIntPolynomial& poly, const std::vector<RootBox>& all,
                              std::size_t index) {
  Real x = all[index].center.real();
  for (int it = 0; it < 200; ++it) {
    const Real fx = poly.eval(x);
    const Real dfx = poly.eval_derivative(x);
    if (dfx == 0) return false;
    const Real step = fx / dfx;
    x -= step;
    if (abs(step) < pow10(-2 * static_cast<int>(working_digits) / 3)) break;
  }
  for (int k = 20; k <= 200; k += 20) {
    const Real h = pow10(-k) * (1 + abs(x));
    const Real lo = poly.eval(x - h), hi = poly.eval(x + h);
    if ((lo < 0) == (hi < 0) || lo == 0 || hi == 0) continue;
    bool clear = true;
    for (std::size_t j = 0; j < all.size() && clear; ++j) {
      if (j == index) continue;
      // distance from the other disk to the segment [x-h, x+h] on the axis
      const Real dx = abs(all[j].center.real() - x);
      const Real dy = abs(all[j].center.imag());
      const Real seg = dx > h ? dx - h : Real(0);
      if (sqrt(seg * seg + dy * dy) <= all[j].radius) clear = false;
    }
    if (clear) return true;
  }
  return false;
}

}  // namespace detail

// theta, its certified conjugates, lambda = 1/theta, the decay pair (C, rho)
// and the exact power-sum recurrence all live here. Immutable once made.
class PisotContext {
 public:
  static PisotContext make(const MonicIntPolynomial& poly, int precision_digits) {
    if (precision_digits < 1 || precision_digits > 200)
      throw std::invalid_argument("pisot: precision_digits out of range [1, 200]");
    return PisotContext(poly, precision_digits);
  }

  const MonicIntPolynomial& poly() const { return poly_; }
  int precision_digits() const { return precision_digits_; }
  const std::vector<RootBox>& roots() const { return roots_; }
  const RootBox& theta_box() const { return roots_[0]; }
  const HComplex& theta() const { return roots_[0].center; }
  const HComplex& lambda() const { return lambda_; }
  Real theta_abs() const { return abs(theta()); }
  Real theta_arg() const { return atan2(theta().imag(), theta().real()); }
  const Real& rho() const { return rho_; }
  const Real& C() const { return C_; }
  std::size_t theta_conj_index() const { return theta_conj_index_; }

  // Roots beyond the dominant conjugate pair.
  std::vector<std::size_t> other_root_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < roots_.size(); ++i)
      if (i != theta_conj_index_) out.push_back(i);
    return out;
  }

 private:
  PisotContext(const MonicIntPolynomial& poly, int precision_digits)
      : poly_(poly), precision_digits_(precision_digits) {
    roots_ = find_roots(poly_, precision_digits);
    lambda_ = HComplex(Real(1), Real(0)) / roots_[0].center;
    // locate the conjugate of the dominant root among the remaining boxes
    theta_conj_index_ = 0;
    const HComplex conj_theta = conj(roots_[0].center);
    for (std::size_t i = 1; i < roots_.size(); ++i) {
      if (abs(roots_[i].center - conj_theta) <= roots_[0].radius + roots_[i].radius) {
        theta_conj_index_ = i;
        break;
      }
    }
    // decay rate: covers the non-dominant conjugates forward and 1/|theta|
    // backward; certified upper bounds throughout.
    const Real inv_theta_hi = 1 / (abs(roots_[0].center) - roots_[0].radius);
    Real r = inv_theta_hi;
    for (std::size_t i = 1; i < roots_.size(); ++i) {
      if (i == theta_conj_index_) continue;
      const Real m = abs(roots_[i].center) + roots_[i].radius;
      if (m > r) r = m;
    }
    rho_ = r + pow10(-30);
    C_ = Real(poly_.degree() - 2) + 2;
  }

  MonicIntPolynomial poly_;
  int precision_digits_;
  std::vector<RootBox> roots_;
  std::size_t theta_conj_index_ = 0;
  HComplex lambda_;
  Real rho_;
  Real C_;
};

inline PisotCertificate verify_complex_pisot(const PisotContext& ctx) {
  PisotCertificate cert;
  const auto& roots = ctx.roots();
  const auto& theta = roots[0];
  const Real thr = precision_threshold(ctx.precision_digits());

  // nonreal, certified either way
  const Real im_gap = abs(theta.center.imag()) - theta.radius;
  if (im_gap > thr) {
    cert.im_margin = im_gap;
  } else if (detail::certify_real_root(ctx.poly(), roots, 0)) {
    cert.failure_reason = "dominant root is real";
    return cert;
  } else {
    throw PrecisionError("pisot: cannot decide whether the dominant root is real");
  }

  const Real mod_gap = abs(theta.center) - theta.radius - 1;
  if (mod_gap > thr) {
    cert.dominant_modulus_margin = mod_gap;
  } else if (abs(theta.center) + theta.radius < 1 - thr) {
    cert.failure_reason = "dominant root has modulus < 1";
    return cert;
  } else {
    throw PrecisionError("pisot: dominant modulus too close to 1");
  }

  if (ctx.theta_conj_index() == 0) {
    cert.failure_reason = "conjugate of the dominant root not found among the remaining roots";
    return cert;
  }

  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (i == ctx.theta_conj_index()) continue;
    const Real inside = 1 - abs(roots[i].center) - roots[i].radius;
    if (inside > thr) {
      cert.conjugate_margins.push_back(inside);
    } else if (abs(roots[i].center) - roots[i].radius > 1 + thr) {
      std::ostringstream why;
      why << "conjugate #" << i << " has modulus > 1";
      cert.failure_reason = why.str();
      return cert;
    } else {
      throw PrecisionError("pisot: conjugate modulus too close to 1");
    }
  }

  cert.is_complex_pisot = true;
  return cert;
}

struct DenseRotationResult {
  enum class Status { certified, refuted, inapplicable };
  Status status = Status::inapplicable;
  std::optional<BigInt> rational_root_witness;
  Real probe_min_im;  // certified lower bound on min |Im theta^n|, 1 <= n <= N_probe
  std::string detail;
};

// Degree-3 criterion: an irreducible cubic whose dominant root is certified
// complex Pisot has an irrational rotation angle. Other degrees are reported
// inapplicable; a rational root refutes irreducibility with a witness. A
// direct powering probe cross-checks that no small power becomes real.
inline DenseRotationResult verify_dense_rotation_criterion(const PisotContext& ctx,
                                                           const PisotCertificate& pisot_cert,
                                                           int n_probe = 64) {
  DenseRotationResult res;
  if (ctx.poly().degree() != 3) {
    res.status = DenseRotationResult::Status::inapplicable;
    res.detail = "criterion applies to degree 3 only";
    return res;
  }
  const auto roots = ctx.poly().integer_roots();
  if (!roots.empty()) {
    res.status = DenseRotationResult::Status::refuted;
    res.rational_root_witness = roots.front();
    res.detail = "polynomial has an integer root";
    return res;
  }
  if (!pisot_cert.is_complex_pisot) {
    res.status = DenseRotationResult::Status::inapplicable;
    res.detail = "dominant root is not certified complex Pisot";
    return res;
  }

  const HComplex& theta = ctx.theta();
  const Real r = ctx.theta_box().radius;
  const Real thr = precision_threshold(ctx.precision_digits());
  Real min_im(-1);
  HComplex p(Real(1), Real(0));
  Real abs_hi = abs(theta) + r;
  Real pow_hi(1);
  for (int n = 1; n <= n_probe; ++n) {
    p *= theta;
    // |theta^n - p| <= n * (|theta|+r)^(n-1) * r
    const Real err = Real(n) * pow_hi * r;
    pow_hi *= abs_hi;
    const Real im_lo = abs(p.imag()) - err;
    if (im_lo <= thr)
      throw PrecisionError("pisot: rotation probe cannot separate Im(theta^n) from zero");
    if (min_im < 0 || im_lo < min_im) min_im = im_lo;
  }
  res.probe_min_im = min_im;
  res.status = DenseRotationResult::Status::certified;
  res.detail = "irreducible cubic with certified complex Pisot dominant root";
  return res;
}

}  // namespace ssm::algebraic
