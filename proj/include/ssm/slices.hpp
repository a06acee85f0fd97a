#pragma once

// Discretized slices: partition the sample by its coordinate along a unit
// direction z into bands of half-width delta, and study the conditional
// (slice) measures through their transforms along the rotated direction
// z_perp = e^{-i pi/2} z.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/ifs.hpp"
#include "ssm/pisot.hpp"
#include "ssm/power_sums.hpp"
#include "ssm/sampling.hpp"
#include "ssm/wiener.hpp"

namespace ssm::measure {

inline std::complex<double> z_perp(std::complex<double> z) {
  return {z.imag(), -z.real()};  // -i * z
}

inline HComplex z_perp(const HComplex& z) { return HComplex(z.imag(), -z.real()); }

// A band of half-width delta through w, transverse coordinate along z_perp.
struct SliceSpec {
  std::complex<double> z;  // unit normal direction of the band stack
  std::complex<double> w;  // center point
  double delta = 0;        // band half-width

  SliceSpec(std::complex<double> z_, std::complex<double> w_, double delta_)
      : z(z_), w(w_), delta(delta_) {
    if (std::abs(std::abs(z) - 1.0) > 1e-14)
      throw std::invalid_argument("SliceSpec: direction must be a unit vector");
    if (!(delta > 0)) throw std::invalid_argument("SliceSpec: delta must be positive");
  }
};

// coordinate of xi along z_perp after recentering at w
inline double recenter(std::complex<double> xi, const SliceSpec& spec) {
  const std::complex<double> zp = z_perp(spec.z);
  const std::complex<double> d = xi - spec.w;
  return d.real() * zp.real() + d.imag() * zp.imag();
}

// unit direction (conj(theta)/|theta|)^j
inline HComplex eta_power(const algebraic::PisotContext& ctx, long j) {
  if (j < 0) throw std::invalid_argument("eta_power: exponent must be nonnegative");
  const HComplex eta = conj(ctx.theta()) / ctx.theta_abs();
  return algebraic::detail::pow_by_squaring(eta, static_cast<unsigned long long>(j));
}

// t_k = <4 pi conj(theta)^k, z_perp>, the slice-transform frequency induced on
// the z_perp axis by the k-th distinguished frequency of the plane transform.
inline Real slice_frequency_value(const algebraic::PisotContext& ctx, const HComplex& z,
                                  long k) {
  if (k < 0) throw std::invalid_argument("slice_frequency_value: k must be nonnegative");
  const HComplex f =
      4 * real_pi() *
      algebraic::detail::pow_by_squaring(conj(ctx.theta()), static_cast<unsigned long long>(k));
  const HComplex zp = z_perp(z);
  return (f * conj(zp)).real();
}

inline std::vector<double> pisot_slice_frequencies(const algebraic::PisotContext& ctx,
                                                   const HComplex& z, int count) {
  if (count < 1) throw std::invalid_argument("pisot_slice_frequencies: count must be >= 1");
  if (abs(abs(z) - 1) > Real("1e-14"))
    throw std::invalid_argument("pisot_slice_frequencies: direction must be a unit vector");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(to_double(slice_frequency_value(ctx, z, k)));
  return out;
}

struct SliceFrequencyResult {
  bool found = false;
  long k = -1;          // smallest admissible exponent when found
  double t = 0;         // the frequency value at k (inside (n, n+1))
  long nearest_k = -1;  // closest attempt otherwise
  double nearest_miss = 0;  // its distance to the window
};

// Smallest k <= k_cap with t_k strictly inside the window (n, n+1); honest
// not-found result carrying the nearest miss.  Window membership is decided
// in high precision; an undecidable boundary case raises PrecisionError.
inline SliceFrequencyResult find_slice_frequency(const algebraic::PisotContext& ctx,
                                                 const HComplex& z, long n, long k_cap) {
  if (n < 0) throw std::invalid_argument("find_slice_frequency: n must be nonnegative");
  if (k_cap < 0) throw std::invalid_argument("find_slice_frequency: k_cap must be nonnegative");
  if (abs(abs(z) - 1) > Real("1e-14"))
    throw std::invalid_argument("find_slice_frequency: direction must be a unit vector");

  SliceFrequencyResult res;
  Real best_miss = -1;
  const Real lo(n), hi(n + 1);
  for (long k = 0; k <= k_cap; ++k) {
    const Real t = slice_frequency_value(ctx, z, k);
    const Real err = (abs(t) + 1) * Real(k + 4) * pow10(-(working_digits - 10));
    const Real m_lo = t - lo, m_hi = hi - t;
    if (m_lo > err && m_hi > err) {
      res.found = true;
      res.k = k;
      res.t = to_double(t);
      return res;
    }
    if (abs(m_lo) <= err || abs(m_hi) <= err)
      throw PrecisionError("find_slice_frequency: window boundary undecidable at k=" +
                           std::to_string(k));
    const Real miss = (m_lo < 0) ? -m_lo : -m_hi;
    if (best_miss < 0 || miss < best_miss) {
      best_miss = miss;
      res.nearest_k = k;
      res.nearest_miss = to_double(miss);
    }
  }
  return res;
}

// Statistics of one band half-width level of a slice experiment.
struct SliceLevel {
  double delta = 0;
  long bands_nonempty = 0;
  long bands_used = 0;       // bands with at least two points
  double dropped_mass = 0;   // sample mass in the skipped singleton bands
  std::vector<double> raw_avg;       // per frequency: sum_b (m_b/n) |S_b/m_b|^2
  std::vector<double> debiased_avg;  // per frequency: sum_b (m_b/n) (|S_b|^2-m_b)/(m_b(m_b-1))
  double band_wiener_mean = 0;  // mass-weighted Wiener average over sampled bands
  long band_wiener_bands = 0;   // how many bands entered that average
};

struct SliceReport {
  std::complex<double> direction;
  std::vector<double> deltas;
  std::vector<double> frequencies;
  std::uint64_t seed = 0;
  long samples = 0;
  int depth = 0;
  double truncation_radius = 0;
  std::vector<SliceLevel> levels;
};

// Sample the measure, bin the coordinate along z into bands of width
// 2*delta, and for every requested frequency t average |F(nu_band)(t)|^2
// over bands with the band masses as weights.  The debiased column removes
// the 1/m_b resolution bias of the raw modulus-square.  A subset of bands
// additionally gets a full Wiener average over [-band_wiener_M, band_wiener_M].
inline SliceReport slice_experiment(const construction::IFSConfig& cfg, const HComplex& z,
                                    const std::vector<double>& deltas, long samples,
                                    std::uint64_t seed, const std::vector<double>& frequencies,
                                    int depth = 40, int threads = 1,
                                    double band_wiener_M = 250.0, long band_wiener_count = 16,
                                    long band_wiener_point_cap = 4000) {
  if (deltas.empty()) throw std::invalid_argument("slice_experiment: need at least one delta");
  for (const double d : deltas)
    if (!(d > 0)) throw std::invalid_argument("slice_experiment: deltas must be positive");
  if (frequencies.empty())
    throw std::invalid_argument("slice_experiment: need at least one frequency");
  if (samples < 4) throw std::invalid_argument("slice_experiment: need at least 4 samples");
  if (band_wiener_count < 1 || !(band_wiener_M > 0) || band_wiener_point_cap < 2)
    throw std::invalid_argument("slice_experiment: invalid band Wiener parameters");
  if (abs(abs(z) - 1) > Real("1e-14"))
    throw std::invalid_argument("slice_experiment: direction must be a unit vector");

  SliceReport rep;
  rep.deltas = deltas;
  rep.frequencies = frequencies;
  rep.seed = seed;
  rep.samples = samples;
  rep.depth = depth;
  const std::complex<double> zd = to_complex_double(z);
  rep.direction = zd;
  const std::complex<double> zpd = z_perp(zd);

  const auto n = static_cast<std::size_t>(samples);
  std::vector<double> p(n), y(n);
  {
    const EmpiricalMeasure em = sample_measure(cfg, depth, samples, seed, threads);
    rep.truncation_radius = em.truncation_radius;
    ssm::run_blocks(n, ssm::default_block, threads,
                    [&](std::size_t, std::size_t begin, std::size_t end) {
                      for (std::size_t i = begin; i < end; ++i) {
                        const std::complex<double> w = em.points[i];
                        p[i] = w.real() * zd.real() + w.imag() * zd.imag();
                        y[i] = w.real() * zpd.real() + w.imag() * zpd.imag();
                      }
                    });
  }
  const double radius = to_double(cfg.attractor_radius);

  for (const double delta : deltas) {
    SliceLevel lev;
    lev.delta = delta;

    // counting sort of the band indices (width 2*delta, anchored at -radius-delta)
    const double off = radius + delta;
    const double width = 2.0 * delta;
    std::vector<long> idx(n);
    long min_idx = 0, max_idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = static_cast<long>(std::floor((p[i] + off) / width));
      if (i == 0) {
        min_idx = max_idx = idx[i];
      } else {
        min_idx = std::min(min_idx, idx[i]);
        max_idx = std::max(max_idx, idx[i]);
      }
    }
    const auto nbins = static_cast<std::size_t>(max_idx - min_idx + 1);
    std::vector<long> count(nbins, 0);
    for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(idx[i] - min_idx)];
    std::vector<std::size_t> start(nbins + 1, 0);
    for (std::size_t b = 0; b < nbins; ++b) start[b + 1] = start[b] + static_cast<std::size_t>(count[b]);
    std::vector<double> ysorted(n);
    {
      std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
      for (std::size_t i = 0; i < n; ++i)
        ysorted[cursor[static_cast<std::size_t>(idx[i] - min_idx)]++] = y[i];
    }

    long dropped = 0;
    std::vector<std::size_t> used;
    for (std::size_t b = 0; b < nbins; ++b) {
      if (count[b] >= 1) ++lev.bands_nonempty;
      if (count[b] >= 2)
        used.push_back(b);
      else
        dropped += count[b];
    }
    lev.bands_used = static_cast<long>(used.size());
    lev.dropped_mass = static_cast<double>(dropped) / static_cast<double>(n);

    lev.raw_avg.assign(frequencies.size(), 0.0);
    lev.debiased_avg.assign(frequencies.size(), 0.0);
    for (std::size_t fi = 0; fi < frequencies.size(); ++fi) {
      const double t = frequencies[fi];
      double raw = 0.0, deb = 0.0;
      for (const std::size_t b : used) {
        const auto m = static_cast<double>(count[b]);
        double sr = 0.0, si = 0.0;
        for (std::size_t j = start[b]; j < start[b + 1]; ++j) {
          sr += std::cos(t * ysorted[j]);
          si += std::sin(t * ysorted[j]);
        }
        const double s2 = sr * sr + si * si;
        raw += (m / static_cast<double>(n)) * (s2 / (m * m));
        deb += (m / static_cast<double>(n)) * ((s2 - m) / (m * (m - 1.0)));
      }
      lev.raw_avg[fi] = raw;
      lev.debiased_avg[fi] = deb;
    }

    if (!used.empty()) {
      const double diameter = 2.0 * (radius + 1e-9);
      const double required = 3.14159265358979323846 / (2.0 * diameter);
      const double step = required * 0.99;
      const std::size_t take =
          std::min(used.size(), static_cast<std::size_t>(band_wiener_count));
      const std::size_t stride = used.size() / take;
      double wsum = 0.0, msum = 0.0;
      for (std::size_t j = 0; j < take; ++j) {
        const std::size_t b = used[j * stride];
        const auto m = static_cast<double>(count[b]);
        // a deterministic prefix of the band (itself an i.i.d. subsample)
        // keeps the cost bounded in very heavy bands
        const std::size_t use = std::min(start[b + 1] - start[b],
                                         static_cast<std::size_t>(band_wiener_point_cap));
        const WienerResult wr = empirical_wiener(ysorted.data() + start[b], use,
                                                 band_wiener_M, step, diameter);
        wsum += m * wr.value;
        msum += m;
      }
      lev.band_wiener_mean = wsum / msum;
      lev.band_wiener_bands = static_cast<long>(take);
    }

    rep.levels.push_back(std::move(lev));
  }
  return rep;
}

}  // namespace ssm::measure
