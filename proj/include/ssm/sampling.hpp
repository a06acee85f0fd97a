#pragma once

// Monte Carlo sampling of the self-similar measure by truncated digit
// expansion z = sum_{n<depth} lambda^n X_n, X_n uniform over the four signed
// translations.  Every point is a pure function of (seed, index), so results
// are bit-identical regardless of thread count.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/ifs.hpp"
#include "ssm/parallel.hpp"
#include "ssm/rng.hpp"

namespace ssm::measure {

inline std::complex<double> to_complex_double(const HComplex& z) {
  return {to_double(z.real()), to_double(z.imag())};
}

// Uniformly weighted finite point cloud approximating mu.
struct EmpiricalMeasure {
  std::vector<std::complex<double>> points;
  int depth = 0;
  std::uint64_t seed = 0;
  double truncation_radius = 0;  // |lambda|^depth * R: distance to the untruncated sum
};

// Projection of an empirical measure to the line along a direction.
struct ProjectedMeasure {
  std::vector<double> points;
  int depth = 0;
  std::uint64_t seed = 0;
};

inline EmpiricalMeasure sample_measure(const construction::IFSConfig& cfg, int depth,
                                       long count, std::uint64_t seed, int threads = 1) {
  if (depth < 1 || depth > 1024)
    throw std::invalid_argument("sample_measure: depth must lie in [1, 1024]");
  if (count < 1) throw std::invalid_argument("sample_measure: count must be >= 1");
  if (count > 2000000000L) throw std::invalid_argument("sample_measure: count too large");

  const std::complex<double> lam = to_complex_double(cfg.ctx.lambda());
  std::array<std::complex<double>, 4> trans;
  {
    const auto tr = cfg.translations();
    for (int i = 0; i < 4; ++i) trans[static_cast<std::size_t>(i)] = to_complex_double(tr[static_cast<std::size_t>(i)]);
  }

  EmpiricalMeasure em;
  em.depth = depth;
  em.seed = seed;
  em.truncation_radius =
      to_double(pow(abs(cfg.ctx.lambda()), depth) * cfg.attractor_radius);
  em.points.resize(static_cast<std::size_t>(count));

  const int words = (depth + 31) / 32;  // 32 two-bit digits per 64-bit word
  ssm::run_blocks(static_cast<std::size_t>(count), ssm::default_block, threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    std::array<std::uint64_t, 32> w{};
                    for (std::size_t i = begin; i < end; ++i) {
                      auto rng = ssm::stream_for(seed, static_cast<std::uint64_t>(i));
                      for (int j = 0; j < words; ++j) w[static_cast<std::size_t>(j)] = rng.next();
                      std::complex<double> z(0.0, 0.0);
                      for (int n = depth - 1; n >= 0; --n) {
                        const unsigned d =
                            static_cast<unsigned>(w[static_cast<std::size_t>(n >> 5)] >> (2 * (n & 31))) & 3u;
                        z = lam * z + trans[d];
                      }
                      em.points[i] = z;
                    }
                  });
  return em;
}

// signed coordinate along a unit direction: <w, z> = Re(w * conj(z))
inline ProjectedMeasure project(const EmpiricalMeasure& em, std::complex<double> z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-14)
    throw std::invalid_argument("project: direction must be a unit vector");
  ProjectedMeasure pm;
  pm.depth = em.depth;
  pm.seed = em.seed;
  pm.points.resize(em.points.size());
  const double zr = z.real(), zi = z.imag();
  for (std::size_t i = 0; i < em.points.size(); ++i)
    pm.points[i] = em.points[i].real() * zr + em.points[i].imag() * zi;
  return pm;
}

// (1/n) sum_i exp(i <p_i, xi>), accumulated in fixed-size blocks combined in
// index order so the result is independent of the thread count.
inline std::complex<double> empirical_transform(const EmpiricalMeasure& em,
                                                std::complex<double> xi, int threads = 1) {
  const std::size_t n = em.points.size();
  if (n == 0) throw std::invalid_argument("empirical_transform: empty measure");
  const std::size_t nblocks = (n + ssm::default_block - 1) / ssm::default_block;
  std::vector<std::complex<double>> partial(nblocks, std::complex<double>(0.0, 0.0));
  const double xr = xi.real(), xim = xi.imag();
  ssm::run_blocks(n, ssm::default_block, threads,
                  [&](std::size_t blk, std::size_t begin, std::size_t end) {
                    double sr = 0.0, si = 0.0;
                    for (std::size_t i = begin; i < end; ++i) {
                      const double ph = em.points[i].real() * xr + em.points[i].imag() * xim;
                      sr += std::cos(ph);
                      si += std::sin(ph);
                    }
                    partial[blk] = {sr, si};
                  });
  std::complex<double> total(0.0, 0.0);
  for (const auto& p : partial) total += p;
  return total / static_cast<double>(n);
}

// Kolmogorov-Smirnov distance of a sample to the uniform law on its own range
// (exploratory diagnostic; 1.0 for a degenerate range).
inline double ks_uniform_distance(std::vector<double> pts) {
  if (pts.empty()) throw std::invalid_argument("ks_uniform_distance: empty sample");
  std::sort(pts.begin(), pts.end());
  const double a = pts.front(), b = pts.back();
  if (!(b > a)) return 1.0;
  const double n = static_cast<double>(pts.size());
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double F = (pts[i] - a) / (b - a);
    d = std::max(d, std::abs(static_cast<double>(i) / n - F));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return d;
}

}  // namespace ssm::measure
