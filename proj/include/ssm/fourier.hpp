#pragma once

// Fourier transform of the self-similar measure: unilateral infinite-product
// evaluation valid at every frequency, a bilateral evaluator specialised to
// the Pisot frequency sequence 4*pi*conj(theta)^N with exact integer argument
// reduction, a certified positive lower bound along that sequence, and a
// direction/radius scanner for non-decay witnesses.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/ifs.hpp"
#include "ssm/parallel.hpp"
#include "ssm/power_sums.hpp"

namespace ssm::fourier {

using ssm::construction::IFSConfig;

// One bilateral product factor b_n = cos(pi*A+) * cos(pi*A-) where
// A+- = k1*u_{n-l1} +- k2*u_{n-l2} and u_m = 2*Re(theta^m).
// margin: certified distance of each reduced argument from the half-integers
// (positive margin proves b_n != 0); value_err: bound on |value - true b_n|.
struct BFactor {
  Real value;
  Real margin;
  Real value_err;
};

struct FrequencySample {
  HComplex xi;
  HComplex value;
  Real error;
};

struct CertifiedBound {
  Real c;                  // rigorous positive lower bound on inf_N |F(4 pi conj(theta)^N)|
  int M_cut = 0;           // first n >= 0 with C0 * rho^n < 1
  int M_explicit = 0;      // explicit tail factors cover M_cut <= m < M_explicit
  Real central_product;    // prod over |n| < M_cut of (|b_n| - value_err)
  Real tail_product;       // prod over explicit m of (1 - C0 rho^m)^2
  Real tail_exp_bound;     // exp(-4 C0 rho^{M_explicit} / (1 - rho))
  std::vector<std::pair<long, BFactor>> central_factors;
};

namespace detail {

// Exact decomposition u = integer + frac with frac in (-1/2, 1/2],
// plus a certified error radius for frac.
struct FracEntry {
  Real frac;
  BigInt integer;
  Real err;
};

// sign-aware cosine of pi*(I + f): equals (-1)^(I mod 2) * cos(pi*f).
inline Real signed_cos_pi(const BigInt& I, const Real& f) {
  Real cv = cos(real_pi() * f);
  if (I % 2 != 0) cv = -cv;
  return cv;
}

// Certified signed cosine used by the half-integer rejection path: margin is
// the distance of |f| from 1/2 minus the argument error; below the threshold
// the sign of the cosine cannot be certified.
inline Real checked_signed_cos_pi(const BigInt& I, const Real& f, const Real& arg_err,
                                  const Real& threshold, const char* what) {
  const Real margin = Real(1) / 2 - abs(f) - arg_err;
  if (!(margin > threshold)) {
    std::ostringstream os;
    os << what << ": cosine argument within " << to_double(margin + arg_err)
       << " of a half-integer; cannot certify a nonzero factor";
    throw PrecisionError(os.str());
  }
  return signed_cos_pi(I, f);
}

}  // namespace detail

class FourierEvaluator {
 public:
  explicit FourierEvaluator(IFSConfig cfg, Real tail_tol = Real("1e-12"),
                            int precision_digits = 50, long table_cap = 1024)
      : cfg_(std::move(cfg)),
        tail_tol_(std::move(tail_tol)),
        precision_digits_(precision_digits),
        table_cap_(table_cap) {
    if (!(tail_tol_ > 0) || !(tail_tol_ < 1))
      throw std::invalid_argument("FourierEvaluator: tail_tol must lie in (0,1)");
    if (precision_digits_ < 1 || precision_digits_ > working_digits - 20)
      throw std::invalid_argument("FourierEvaluator: precision_digits out of range");
    if (table_cap_ < 8) throw std::invalid_argument("FourierEvaluator: table_cap too small");
    const auto& poly = cfg_.ctx.poly();
    if (abs(poly.coeff(0)) != 1)
      throw std::domain_error(
          "FourierEvaluator: bilateral evaluation needs constant term 1 or -1");

    const Real rho = cfg_.ctx.rho();
    const Real Cc(cfg_.ctx.C());
    const Real k1(cfg_.a1.k), k2(cfg_.a2.k);
    C0_ = 2 * real_pi() * Cc *
          (k1 * pow(rho, Real(-cfg_.a1.l)) + k2 * pow(rho, Real(-cfg_.a2.l)));

    M_cut_ = 0;
    while (C0_ * pow(rho, M_cut_) >= 1) {
      if (++M_cut_ > 100000) throw PrecisionError("FourierEvaluator: M_cut not found");
    }
    // backward truncation depth: dropping factors below -M_tail multiplies the
    // product by T in [1 - 2 C0 rho^{M_tail+1}/(1-rho), 1]
    M_tail_ = M_cut_;
    while (2 * C0_ * pow(rho, M_tail_ + 1) / (1 - rho) >= tail_tol_) {
      if (++M_tail_ > table_cap_) throw std::invalid_argument("FourierEvaluator: tail_tol unreachable within table_cap");
    }
    build_table();
  }

  const IFSConfig& config() const { return cfg_; }
  const Real& tail_tol() const { return tail_tol_; }
  const Real& C0() const { return C0_; }
  int M_cut() const { return M_cut_; }
  long M_tail() const { return M_tail_; }
  int precision_digits() const { return precision_digits_; }
  long table_cap() const { return table_cap_; }

  // exact decomposition of u_m = 2 Re theta^m (integer + centered fraction)
  const detail::FracEntry& u_decomposition(long m) const {
    if (m < -table_cap_ || m > table_cap_)
      throw std::out_of_range("FourierEvaluator: index outside precomputed range");
    return table_[static_cast<std::size_t>(m + table_cap_)];
  }

  BFactor b_factor(long n) const {
    const auto& e1 = u_decomposition(n - cfg_.a1.l);
    const auto& e2 = u_decomposition(n - cfg_.a2.l);
    const Real k1(cfg_.a1.k), k2(cfg_.a2.k);
    const Real arg_err = k1 * e1.err + k2 * e2.err + Real("1e-230");
    const Real threshold = precision_threshold(precision_digits_);

    const Real Af1 = k1 * e1.frac, Af2 = k2 * e2.frac;
    const BigInt I1 = cfg_.a1.k * e1.integer, I2 = cfg_.a2.k * e2.integer;

    const FracDecomp plus = frac_centered(Af1 + Af2);
    const FracDecomp minus = frac_centered(Af1 - Af2);
    const Real cp = detail::checked_signed_cos_pi(I1 + I2 + plus.integer, plus.frac, arg_err,
                                                  threshold, "b_factor(+)");
    const Real cm = detail::checked_signed_cos_pi(I1 - I2 + minus.integer, minus.frac, arg_err,
                                                  threshold, "b_factor(-)");
    const Real margin_p = Real(1) / 2 - abs(plus.frac) - arg_err;
    const Real margin_m = Real(1) / 2 - abs(minus.frac) - arg_err;
    return BFactor{cp * cm, (std::min)(margin_p, margin_m),
                   2 * real_pi() * arg_err + Real("1e-220")};
  }

  // unilateral product, valid at every frequency:
  //   F(xi) = prod_{n>=0} ( cos(Re(lambda^n a1 conj(xi))) + cos(Re(lambda^n a2 conj(xi))) ) / 2
  FrequencySample transform(const HComplex& xi) const {
    const HComplex& a1v = cfg_.a1_value;
    const HComplex& a2v = cfg_.a2_value;
    const Real lam_abs = abs(cfg_.ctx.lambda());
    const Real xi_abs = abs(xi);

    // first N with sum_{n>N} (x1n^2 + x2n^2)/4 < tail_tol, x_{j,n} = |lambda|^n |a_j| |xi|
    const Real S0 = (abs(a1v) * abs(a1v) + abs(a2v) * abs(a2v)) * xi_abs * xi_abs / 4;
    const Real lam2 = lam_abs * lam_abs;
    long Nstar = -1;
    Real tail = S0 / (1 - lam2);  // tail(-1); tail(N) = S0 lam^{2(N+1)}/(1-lam^2)
    while (tail >= tail_tol_) {
      tail *= lam2;
      if (++Nstar > 1000000) throw PrecisionError("transform: tail does not close");
    }

    Real prod(1);
    HComplex w = conj(xi);  // lambda^n * conj(xi)
    for (long n = 0; n <= Nstar; ++n) {
      const Real x1 = (a1v * w).real();
      const Real x2 = (a2v * w).real();
      prod *= (cos(x1) + cos(x2)) / 2;
      w *= cfg_.ctx.lambda();
    }
    const Real err = tail_tol_ + xi_abs * Real("1e-225") + Real("1e-225");
    return FrequencySample{xi, HComplex(prod, Real(0)), err};
  }

  // double-precision unilateral product for bulk statistics (Wiener averages,
  // scans over many directions); truncation tolerance `tol`, rounding noise
  // on the order of 1e-10 at |xi| up to 1e6 -- far below statistical scales
  double transform_fast(std::complex<double> xi, double tol = 1e-9) const {
    if (!(tol > 0) || !(tol < 1))
      throw std::invalid_argument("transform_fast: tol must lie in (0,1)");
    const std::complex<double> a1v(to_double(cfg_.a1_value.real()),
                                   to_double(cfg_.a1_value.imag()));
    const std::complex<double> a2v(to_double(cfg_.a2_value.real()),
                                   to_double(cfg_.a2_value.imag()));
    const std::complex<double> lam(to_double(cfg_.ctx.lambda().real()),
                                   to_double(cfg_.ctx.lambda().imag()));
    const double lam2 = std::norm(lam);
    const double xi2 = std::norm(xi);
    const double S0 = (std::norm(a1v) + std::norm(a2v)) * xi2 / 4.0;
    long Nstar = -1;
    double tail = S0 / (1.0 - lam2);
    while (tail >= tol) {
      tail *= lam2;
      if (++Nstar > 100000) throw PrecisionError("transform_fast: tail does not close");
    }
    double prod = 1.0;
    std::complex<double> w = std::conj(xi);
    for (long n = 0; n <= Nstar; ++n) {
      const double x1 = a1v.real() * w.real() - a1v.imag() * w.imag();
      const double x2 = a2v.real() * w.real() - a2v.imag() * w.imag();
      prod *= 0.5 * (std::cos(x1) + std::cos(x2));
      w *= lam;
    }
    return prod;
  }

  HComplex pisot_frequency(long N) const {
    if (N < 0) throw std::invalid_argument("pisot_frequency: N must be nonnegative");
    return 4 * real_pi() *
           ssm::algebraic::detail::pow_by_squaring(conj(cfg_.ctx.theta()),
                                                   static_cast<unsigned long long>(N));
  }

  // bilateral product along the Pisot sequence:
  //   F(4 pi conj(theta)^N) = prod_{m <= N} b_m, truncated below -M_tail
  FrequencySample transform_pisot(long N) const {
    if (N < 0) throw std::invalid_argument("transform_pisot: N must be nonnegative");
    const long max_l = std::max(cfg_.a1.l, cfg_.a2.l);
    if (N + max_l > table_cap_)
      throw std::out_of_range("transform_pisot: N outside precomputed range");
    Real prod(1);
    Real err_sum(0);
    for (long m = N; m >= -M_tail_; --m) {
      const BFactor f = b_factor(m);
      prod *= f.value;
      err_sum += f.value_err;
    }
    return FrequencySample{pisot_frequency(N), HComplex(prod, Real(0)),
                           tail_tol_ + err_sum};
  }

  // c = prod_{|n| < M_cut} (|b_n| - err) * prod_{M_cut <= m < M3} (1 - C0 rho^m)^2
  //       * exp(-4 C0 rho^{M3} / (1 - rho))
  // Every factor of every F(4 pi conj(theta)^N) is either included explicitly,
  // dominated by its (1 - C0 rho^{|n|}) minorant, or covered by the exp tail;
  // factors of the bound absent from a given finite product only lower c.
  CertifiedBound certify_lower_bound(int extra_central = 0) const {
    if (extra_central < 0)
      throw std::invalid_argument("certify_lower_bound: extra_central must be >= 0");
    const Real rho = cfg_.ctx.rho();
    const int Mc = M_cut_ + extra_central;
    int M3 = Mc;
    while (C0_ * pow(rho, M3) > Real("1e-4")) ++M3;

    CertifiedBound out;
    out.M_cut = Mc;
    out.M_explicit = M3;
    out.central_product = 1;
    for (long n = -(Mc - 1); n <= Mc - 1; ++n) {
      const BFactor f = b_factor(n);
      const Real lower = abs(f.value) - f.value_err;
      if (!(lower > 0))
        throw PrecisionError("certify_lower_bound: central factor not certifiably nonzero");
      out.central_product *= lower;
      out.central_factors.emplace_back(n, f);
    }
    out.tail_product = 1;
    for (int m = Mc; m < M3; ++m) {
      const Real f = 1 - C0_ * pow(rho, m);
      out.tail_product *= f * f;
    }
    out.tail_exp_bound = exp(-4 * C0_ * pow(rho, M3) / (1 - rho));
    out.c = out.central_product * out.tail_product * out.tail_exp_bound *
            (1 - Real("1e-30"));
    if (!(out.c > 0)) throw PrecisionError("certify_lower_bound: bound not positive");
    return out;
  }

 private:
  void build_table() {
    const auto& ctx = cfg_.ctx;
    table_.resize(static_cast<std::size_t>(2 * table_cap_ + 1));

    // forward: u_m = s_m - v_m, v_m = sum of non-dominant-pair root powers (exact
    // integer s_m absorbs all the growth; v_m and its error decay geometrically)
    ssm::algebraic::PowerSumSequence seq(ctx.poly(), table_cap_ + 2);
    const auto others = ctx.other_root_indices();
    std::vector<HComplex> pw(others.size(), HComplex(Real(1), Real(0)));
    std::vector<Real> growth(others.size(), Real(1));  // (|z_i| + r_i)^{m-1}
    for (long m = 0; m <= table_cap_; ++m) {
      HComplex v(Real(0), Real(0));
      Real err(0);
      for (std::size_t i = 0; i < others.size(); ++i) {
        const auto& box = ctx.roots()[others[i]];
        v += pw[i];
        if (m > 0) err += Real(m) * growth[i] * box.radius;
      }
      const FracDecomp fd = frac_centered(-v.real());
      auto& entry = table_[static_cast<std::size_t>(m + table_cap_)];
      entry.frac = fd.frac;
      entry.integer = seq.at(m) + fd.integer;
      entry.err = err + abs(v.imag()) + Real("1e-230");
      for (std::size_t i = 0; i < others.size(); ++i) {
        const auto& box = ctx.roots()[others[i]];
        pw[i] *= box.center;
        if (m > 0) growth[i] *= abs(box.center) + box.radius;
      }
    }

    // backward: u_{-j} = 2 Re lambda^j directly (no integer part to speak of)
    const HComplex lam = ctx.lambda();
    const Real rel = ctx.theta_box().radius / (abs(ctx.theta_box().center) - ctx.theta_box().radius);
    HComplex p(Real(1), Real(0));
    for (long j = 1; j <= table_cap_; ++j) {
      p *= lam;
      const FracDecomp fd = frac_centered(2 * p.real());
      auto& entry = table_[static_cast<std::size_t>(table_cap_ - j)];
      entry.frac = fd.frac;
      entry.integer = fd.integer;
      entry.err = 2 * abs(p) * (pow(1 + rel, static_cast<int>(j)) - 1) + Real("1e-230");
    }
  }

  IFSConfig cfg_;
  Real tail_tol_;
  int precision_digits_;
  long table_cap_;
  Real C0_;
  int M_cut_ = 0;
  long M_tail_ = 0;
  std::vector<detail::FracEntry> table_;
};

struct ScanRow {
  double angle = 0;        // direction angle in [0, 2*pi)
  double best_radius = 0;  // radius attaining the supremum
  double sup_modulus = 0;  // sup over sampled radii of |F(r e^{i angle})|
  int exceeds_c = 0;       // 1 if some sample certifies |F| - err > c
};

// Samples |F| on an angular grid x log-radial grid, then folds in the special
// samples at xi = 4 pi conj(theta)^k (direction snapped to the nearest grid
// angle) evaluated with the certified bilateral form.
inline std::vector<ScanRow> scan_directions(const FourierEvaluator& ev, long n_dirs,
                                            const Real& r_min, const Real& r_max,
                                            long n_radii, const Real& c,
                                            long special_k_cap = 64, int threads = 1) {
  if (n_dirs < 1) throw std::invalid_argument("scan_directions: n_dirs must be >= 1");
  if (n_radii < 1) throw std::invalid_argument("scan_directions: n_radii must be >= 1");
  if (!(r_min >= 1)) throw std::invalid_argument("scan_directions: r_min must be >= 1");
  if (!(r_max >= r_min)) throw std::invalid_argument("scan_directions: r_max must be >= r_min");
  if (special_k_cap < 0) throw std::invalid_argument("scan_directions: special_k_cap must be >= 0");

  std::vector<ScanRow> rows(static_cast<std::size_t>(n_dirs));
  const Real two_pi = real_two_pi();
  const Real log_ratio = log(r_max / r_min);

  ssm::run_blocks(static_cast<std::size_t>(n_dirs), 1, threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const Real angle = two_pi * Real(static_cast<long>(i)) / Real(n_dirs);
                      const HComplex dir(cos(angle), sin(angle));
                      ScanRow row;
                      row.angle = to_double(angle);
                      for (long j = 0; j < n_radii; ++j) {
                        const Real r =
                            (n_radii == 1)
                                ? r_min
                                : r_min * exp(log_ratio * Real(j) / Real(n_radii - 1));
                        const auto s = ev.transform(r * dir);
                        const double mod = to_double(abs(s.value));
                        if (mod > row.sup_modulus) {
                          row.sup_modulus = mod;
                          row.best_radius = to_double(r);
                        }
                        if (abs(s.value) - s.error > c) row.exceeds_c = 1;
                      }
                      rows[i] = row;
                    }
                  });

  // special Pisot radii, snapped to the nearest direction cell
  const double arg_theta = to_double(ev.config().ctx.theta_arg());
  const double d_two_pi = 6.283185307179586476925287;
  const Real theta_abs = ev.config().ctx.theta_abs();
  for (long k = 0; k <= special_k_cap; ++k) {
    const Real rk = 4 * real_pi() * pow(theta_abs, static_cast<int>(k));
    if (rk < r_min || rk > r_max) continue;
    double a = std::fmod(-static_cast<double>(k) * arg_theta, d_two_pi);
    if (a < 0) a += d_two_pi;
    long idx = static_cast<long>(std::llround(a / (d_two_pi / static_cast<double>(n_dirs))));
    idx %= n_dirs;
    const auto s = ev.transform_pisot(k);
    auto& row = rows[static_cast<std::size_t>(idx)];
    const double mod = to_double(abs(s.value));
    if (mod > row.sup_modulus) {
      row.sup_modulus = mod;
      row.best_radius = to_double(rk);
    }
    if (abs(s.value) - s.error > c) row.exceeds_c = 1;
  }
  return rows;
}

// Fraction of n_cells angular cells visited by the orbit k*arg(theta) mod 2pi,
// k = 0..k_max: an equidistribution witness for the direction set.
inline double direction_density(const ssm::algebraic::PisotContext& ctx, long n_cells,
                                long k_max) {
  if (n_cells < 1) throw std::invalid_argument("direction_density: n_cells must be >= 1");
  if (k_max < 0) throw std::invalid_argument("direction_density: k_max must be >= 0");
  const double arg = to_double(ctx.theta_arg());
  const double two_pi = 6.283185307179586476925287;
  std::vector<char> hit(static_cast<std::size_t>(n_cells), 0);
  double a = 0;
  for (long k = 0; k <= k_max; ++k) {
    long cell = static_cast<long>(a / two_pi * static_cast<double>(n_cells));
    if (cell >= n_cells) cell = n_cells - 1;
    if (cell < 0) cell = 0;
    hit[static_cast<std::size_t>(cell)] = 1;
    a += arg;
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
  }
  long cnt = 0;
  for (char h : hit) cnt += h;
  return static_cast<double>(cnt) / static_cast<double>(n_cells);
}

// Control measure for the radial scan: the normalized uniform law on the unit
// disk has transform 2 J_1(|xi|)/|xi|, which decays like |xi|^{-3/2} along
// every direction.  Returns its largest modulus over a log-spaced radius grid.
inline double disk_control_sup(double r_min, double r_max, int n_samples = 4096) {
  if (!(r_min > 0) || !(r_max >= r_min))
    throw std::invalid_argument("disk_control_sup: need 0 < r_min <= r_max");
  if (n_samples < 2) throw std::invalid_argument("disk_control_sup: need n_samples >= 2");
  const double lr = std::log(r_max / r_min);
  double sup = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double r =
        r_min * std::exp(lr * static_cast<double>(i) / static_cast<double>(n_samples - 1));
    sup = std::max(sup, std::abs(2.0 * std::cyl_bessel_j(1, r) / r));
  }
  return sup;
}

}  // namespace ssm::fourier
