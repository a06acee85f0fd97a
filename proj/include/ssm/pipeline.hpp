#pragma once

// Subcommand implementations behind the CLI executable.  Every function
// returns a process exit code: 0 = success, 1 = a certification failed
// (honest refutation or undecidable precision), 2 = usage/config error.
// Output files carry no timestamps, so identical configs reproduce
// byte-identical artifacts.

#include <cmath>
#include <complex>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ssm/common.hpp"
#include "ssm/config.hpp"
#include "ssm/fourier.hpp"
#include "ssm/ifs.hpp"
#include "ssm/io.hpp"
#include "ssm/pisot.hpp"
#include "ssm/polynomial.hpp"
#include "ssm/power_sums.hpp"
#include "ssm/sampling.hpp"
#include "ssm/slices.hpp"
#include "ssm/wiener.hpp"

namespace ssm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_certification = 1;
inline constexpr int exit_usage = 2;

template <typename Fn>
int run_guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const PrecisionError& e) {
    log << "certification failure: " << e.what() << "\n";
    return exit_certification;
  } catch (const construction::YSearchError& e) {
    log << "certification failure: " << e.what() << "\n";
    return exit_certification;
  } catch (const std::invalid_argument& e) {
    log << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {
    log << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::out_of_range& e) {
    log << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_certification;
  }
}

inline std::string ifs_path(const RunConfig& cfg) { return cfg.out_dir + "/ifs.json"; }

inline std::string complex_to_string(const HComplex& z) {
  const bool neg = z.imag() < 0;
  return real_to_string(z.real()) + (neg ? " - " : " + ") +
         real_to_string(neg ? Real(-z.imag()) : z.imag()) + " i";
}

inline void ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
}

inline algebraic::PisotContext make_context(const RunConfig& cfg) {
  return algebraic::PisotContext::make(algebraic::MonicIntPolynomial::parse(cfg.polynomial),
                                       cfg.precision_digits);
}

inline fourier::FourierEvaluator make_evaluator(const RunConfig& cfg,
                                                construction::IFSConfig ifs) {
  return fourier::FourierEvaluator(std::move(ifs), Real(cfg.tail_tol), cfg.precision_digits,
                                   128);
}

// ---- verify --------------------------------------------------------------

inline int run_verify(const RunConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const auto ctx = make_context(cfg);
    log << "polynomial: " << ctx.poly().to_string() << "\n";

    const auto cert = algebraic::verify_complex_pisot(ctx);
    if (!cert.is_complex_pisot) {
      log << "verify: dominant root is not complex Pisot: " << cert.failure_reason << "\n";
      return exit_certification;
    }
    log << "complex Pisot: yes (im margin " << to_double(cert.im_margin)
        << ", modulus margin " << to_double(cert.dominant_modulus_margin) << ")\n";
    log << "theta = " << complex_to_string(ctx.theta()) << "\n";
    log << "|theta| = " << real_to_string(ctx.theta_abs()) << "\n";

    const auto rot = algebraic::verify_dense_rotation_criterion(ctx, cert);
    using Status = algebraic::DenseRotationResult::Status;
    if (rot.status != Status::certified) {
      log << "verify: dense rotation not certified: " << rot.detail << "\n";
      return exit_certification;
    }
    log << "dense rotation: certified (probe min |Im theta^n| = "
        << to_double(rot.probe_min_im) << ")\n";

    // geometric decay of dist(2 Re theta^n, Z) with the stored constants
    const algebraic::PowerSumSequence seq(ctx.poly(), 100);
    const Real C(ctx.C());
    const Real rho = ctx.rho();
    for (long n = -40; n <= 60; ++n) {
      const auto d = algebraic::dist_2Re_theta_pow_to_Z(ctx, seq, n);
      const Real bound = C * pow(rho, std::abs(n));
      if (!(d.distance <= bound + d.error)) {
        log << "verify: integer distance decay violated at n = " << n << "\n";
        return exit_certification;
      }
    }
    log << "integer distance decay: dist(2 Re theta^n, Z) <= C rho^|n| on [-40, 60]\n";

    // forward ratio locks onto the small conjugate modulus
    if (ctx.other_root_indices().size() == 1) {
      const Real alpha_abs = abs(ctx.roots()[ctx.other_root_indices()[0]].center);
      for (long n = 10; n <= 40; ++n) {
        const auto d0 = algebraic::dist_2Re_theta_pow_to_Z(ctx, seq, n);
        const auto d1 = algebraic::dist_2Re_theta_pow_to_Z(ctx, seq, n + 1);
        const double ratio = to_double(d1.distance / d0.distance);
        if (std::abs(ratio / to_double(alpha_abs) - 1.0) > 0.10) {
          log << "verify: forward decay ratio off target at n = " << n << "\n";
          return exit_certification;
        }
      }
      log << "forward decay ratio: within 10% of |alpha| = " << to_double(alpha_abs)
          << " on [10, 41]\n";
    }

    log << "verify: all checks certified\n";
    return exit_ok;
  });
}

// ---- build ---------------------------------------------------------------

inline int run_build(const RunConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    auto ctx = make_context(cfg);
    auto ifs = construction::build_default_ifs(ctx, Real(cfg.eps_fraction));
    const auto dim = construction::hausdorff_dimension(ifs);

    log << "a1 = " << ifs.a1.k.str() << " * lambda^" << ifs.a1.l << "\n";
    log << "a2 = " << ifs.a2.k.str() << " * lambda^" << ifs.a2.l << "\n";
    log << "attractor radius R = " << real_to_string(ifs.attractor_radius) << "\n";
    log << "separation: depth " << ifs.ssc_certificate->depth << ", min gap "
        << real_to_string(ifs.ssc_certificate->min_gap) << "\n";
    log << "dim = " << real_to_string(dim.value) << " +/- " << real_to_string(dim.error)
        << "\n";
    const double dv = to_double(dim.value), de = to_double(dim.error);
    if (!(dv - de > 1.0 && dv + de < 1.262)) {
      log << "build: dimension outside the certified window (1, 1.262)\n";
      return exit_certification;
    }

    ensure_out_dir(cfg);
    write_ifs_json(ifs_path(cfg), ifs, cfg.eps_fraction, hex64(config_hash(cfg)));
    log << "wrote " << ifs_path(cfg) << "\n";
    return exit_ok;
  });
}

// ---- certify-bound -------------------------------------------------------

inline int run_certify(const RunConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    auto ev = make_evaluator(cfg, load_ifs_json(ifs_path(cfg)));
    const auto bound = ev.certify_lower_bound();
    log << "c = " << real_to_string(bound.c) << "\n";
    log << "central window |n| < " << bound.M_cut << ", explicit tail to " << bound.M_explicit
        << "\n";
    log << "central product = " << real_to_string(bound.central_product) << "\n";
    log << "tail product    = " << real_to_string(bound.tail_product) << "\n";
    log << "exp tail bound  = " << real_to_string(bound.tail_exp_bound) << "\n";

    ensure_out_dir(cfg);
    CsvWriter csv(cfg.out_dir + "/certify.csv");
    csv.comment("config_hash=" + hex64(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed));
    csv.comment("c=" + real_to_string(bound.c));
    csv.line("N,xi_re,xi_im,value,error,above_c");
    bool all_above = true;
    for (long N = 0; N <= 30; ++N) {
      const auto s = ev.transform_pisot(N);
      const double val = to_double(s.value.real());
      const double err = to_double(s.error);
      const bool above = abs(s.value) - s.error > bound.c && s.error < bound.c / 10;
      all_above = all_above && above;
      csv.row({std::to_string(N), CsvWriter::num(to_double(s.xi.real())),
               CsvWriter::num(to_double(s.xi.imag())), CsvWriter::num(val),
               CsvWriter::num(err), above ? "1" : "0"});
    }
    log << "wrote " << cfg.out_dir << "/certify.csv\n";
    if (!all_above) {
      log << "certify: some frequency failed the certified comparison with c\n";
      return exit_certification;
    }
    log << "certify: |F| > c certified along the first 31 distinguished frequencies\n";
    return exit_ok;
  });
}

// ---- fourier (single point) ----------------------------------------------

inline int run_fourier_point(const RunConfig& cfg, double xi_re, double xi_im,
                             std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    auto ev = make_evaluator(cfg, load_ifs_json(ifs_path(cfg)));
    const auto s = ev.transform(HComplex(Real(xi_re), Real(xi_im)));
    log << "F(" << format_g17(xi_re) << (xi_im < 0 ? " - " : " + ")
        << format_g17(std::abs(xi_im)) << " i) = " << real_to_string(s.value.real())
        << "  (error <= " << real_to_string(s.error, 6) << ")\n";
    return exit_ok;
  });
}

// ---- scan ----------------------------------------------------------------

inline int run_scan(const RunConfig& cfg, long dirs, double r_min, double r_max, long radii,
                    std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    auto ev = make_evaluator(cfg, load_ifs_json(ifs_path(cfg)));
    const auto bound = ev.certify_lower_bound();
    const auto rows =
        fourier::scan_directions(ev, dirs, Real(r_min), Real(r_max), radii, bound.c, 64,
                                 cfg.threads);
    const double control = fourier::disk_control_sup(r_min, r_max);

    ensure_out_dir(cfg);
    CsvWriter csv(cfg.out_dir + "/scan.csv");
    csv.comment("config_hash=" + hex64(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed));
    csv.comment("dirs=" + std::to_string(dirs) + " r_min=" + format_g17(r_min) +
                " r_max=" + format_g17(r_max) + " radii=" + std::to_string(radii));
    csv.comment("c=" + real_to_string(bound.c));
    csv.comment("disk_control_sup=" + CsvWriter::num(control));
    csv.line("angle,best_radius,sup_modulus,exceeds_c");
    long exceeding = 0;
    for (const auto& r : rows) {
      exceeding += r.exceeds_c;
      csv.row({CsvWriter::num(r.angle), CsvWriter::num(r.best_radius),
               CsvWriter::num(r.sup_modulus), std::to_string(r.exceeds_c)});
    }
    log << "scan: " << exceeding << " of " << dirs << " directions certified above c; disk control sup = "
        << control << "\n";
    log << "wrote " << cfg.out_dir << "/scan.csv\n";
    return exit_ok;
  });
}

// ---- sample ----------------------------------------------------------------

inline int run_sample(const RunConfig& cfg, long count, int depth, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const auto ifs = load_ifs_json(ifs_path(cfg));
    const auto em = measure::sample_measure(ifs, depth, count, cfg.seed, cfg.threads);
    ensure_out_dir(cfg);
    const std::string path = cfg.out_dir + "/samples.pslm";
    write_pslm(path, em.points);
    log << "sampled " << count << " points at depth " << depth << " (seed " << cfg.seed
        << ", truncation radius " << em.truncation_radius << ")\n";
    log << "wrote " << path << "\n";
    return exit_ok;
  });
}

// ---- wiener ----------------------------------------------------------------

inline int run_wiener(const RunConfig& cfg, double direction, double M, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    auto ev = make_evaluator(cfg, load_ifs_json(ifs_path(cfg)));
    const double R = to_double(ev.config().attractor_radius);
    const double diameter = 2.0 * R;
    const double step = (3.14159265358979323846 / (2.0 * diameter)) * 0.99;
    const std::complex<double> z(std::cos(direction), std::sin(direction));
    const auto w = measure::wiener_statistic(
        [&](double r) { return std::complex<double>(ev.transform_fast(r * z), 0.0); }, M,
        step, diameter);

    ensure_out_dir(cfg);
    CsvWriter csv(cfg.out_dir + "/wiener.csv");
    csv.comment("config_hash=" + hex64(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed));
    csv.line("direction,M,quad_step,value,error_bound");
    csv.row({CsvWriter::num(direction), CsvWriter::num(M), CsvWriter::num(step),
             CsvWriter::num(w.value), CsvWriter::num(w.error_bound)});
    log << "wiener average over [-M, M] at angle " << format_g17(direction) << ", M = " << M
        << ": " << w.value << " (quadrature error <= " << w.error_bound << ")\n";
    log << "wrote " << cfg.out_dir << "/wiener.csv\n";
    return exit_ok;
  });
}

// ---- slice ----------------------------------------------------------------

inline int run_slice(const RunConfig& cfg, double direction, long eta_index, int nmax,
                     double delta, long samples, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const auto ifs = load_ifs_json(ifs_path(cfg));
    if (nmax < 1) throw std::invalid_argument("slice: nmax must be >= 1");

    HComplex z(Real(0), Real(0));
    if (eta_index >= 0) {
      if (std::isfinite(direction))
        throw std::invalid_argument("slice: give either --direction or --eta, not both");
      z = measure::eta_power(ifs.ctx, eta_index);
    } else if (std::isfinite(direction)) {
      z = HComplex(Real(std::cos(direction)), Real(std::sin(direction)));
    } else {
      z = measure::eta_power(ifs.ctx, 10);  // default distinguished direction
    }

    std::vector<double> deltas;
    const double lam_abs = to_double(abs(ifs.ctx.lambda()));
    if (delta > 0) {
      deltas = {delta};
    } else {
      deltas = {std::pow(lam_abs, 4), std::pow(lam_abs, 6), std::pow(lam_abs, 8)};
    }
    const auto freqs = measure::pisot_slice_frequencies(ifs.ctx, z, nmax);

    const auto rep =
        measure::slice_experiment(ifs, z, deltas, samples, cfg.seed, freqs, 40, cfg.threads);

    ensure_out_dir(cfg);
    CsvWriter csv(cfg.out_dir + "/slice.csv");
    csv.comment("config_hash=" + hex64(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed));
    csv.comment("direction_re=" + CsvWriter::num(rep.direction.real()) +
                " direction_im=" + CsvWriter::num(rep.direction.imag()));
    csv.comment("samples=" + std::to_string(samples) + " depth=" + std::to_string(rep.depth) +
                " truncation_radius=" + CsvWriter::num(rep.truncation_radius));
    csv.line(
        "delta,freq_index,t,raw_avg,debiased_avg,bands_nonempty,bands_used,dropped_mass,"
        "band_wiener_mean");
    for (const auto& lev : rep.levels) {
      for (std::size_t fi = 0; fi < freqs.size(); ++fi) {
        csv.row({CsvWriter::num(lev.delta), std::to_string(fi), CsvWriter::num(freqs[fi]),
                 CsvWriter::num(lev.raw_avg[fi]), CsvWriter::num(lev.debiased_avg[fi]),
                 std::to_string(lev.bands_nonempty), std::to_string(lev.bands_used),
                 CsvWriter::num(lev.dropped_mass), CsvWriter::num(lev.band_wiener_mean)});
      }
      log << "delta = " << lev.delta << ": " << lev.bands_used << " bands used ("
          << lev.bands_nonempty << " nonempty, dropped mass " << lev.dropped_mass
          << "), band wiener mean = " << lev.band_wiener_mean << "\n";
    }
    log << "wrote " << cfg.out_dir << "/slice.csv\n";
    return exit_ok;
  });
}

// ---- report ----------------------------------------------------------------

inline int run_report(const RunConfig& cfg, std::ostream& log) {
  return run_guarded(log, [&]() -> int {
    const auto ifs = load_ifs_json(ifs_path(cfg));
    auto ev = make_evaluator(cfg, ifs);
    const auto& ctx = ev.config().ctx;
    const auto dim = construction::hausdorff_dimension(ev.config());
    const auto bound = ev.certify_lower_bound();

    double min_p = 2.0;
    long min_n = -1;
    for (long N = 0; N <= 30; ++N) {
      const double v = std::abs(to_double(ev.transform_pisot(N).value.real()));
      if (v < min_p) {
        min_p = v;
        min_n = N;
      }
    }

    ensure_out_dir(cfg);
    std::ofstream out(cfg.out_dir + "/report.txt");
    if (!out) throw std::invalid_argument("report: cannot open output file");
    out << "config_hash = " << hex64(config_hash(cfg)) << "\n";
    out << "polynomial = " << ctx.poly().to_string() << "\n";
    out << "theta = " << complex_to_string(ctx.theta()) << "\n";
    out << "|theta| = " << real_to_string(ctx.theta_abs()) << "\n";
    out << "lambda = " << complex_to_string(ctx.lambda()) << "\n";
    out << "|lambda| = " << real_to_string(abs(ctx.lambda())) << "\n";
    out << "a1 = " << ifs.a1.k.str() << " * lambda^" << ifs.a1.l << "\n";
    out << "a2 = " << ifs.a2.k.str() << " * lambda^" << ifs.a2.l << "\n";
    out << "attractor_radius = " << real_to_string(ifs.attractor_radius) << "\n";
    out << "separation_depth = " << ifs.ssc_certificate->depth << "\n";
    out << "separation_min_gap = " << real_to_string(ifs.ssc_certificate->min_gap) << "\n";
    out << "dim = " << real_to_string(dim.value) << " +/- " << real_to_string(dim.error, 6)
        << "\n";
    out << "C0 = " << real_to_string(ev.C0()) << "\n";
    out << "M_cut = " << ev.M_cut() << ", M_tail = " << ev.M_tail() << "\n";
    out << "c = " << real_to_string(bound.c) << "\n";
    out << "min |F| over the first 31 distinguished frequencies = " << CsvWriter::num(min_p)
        << " at N = " << min_n << "\n";
    out << "direction_density(4096 cells, k <= 20000) = "
        << CsvWriter::num(fourier::direction_density(ctx, 4096, 20000)) << "\n";
    out << "disk_control_sup(1e3, 1e6) = "
        << CsvWriter::num(fourier::disk_control_sup(1e3, 1e6)) << "\n";
    log << "wrote " << cfg.out_dir << "/report.txt\n";
    return exit_ok;
  });
}

}  // namespace ssm::cli
