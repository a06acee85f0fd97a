// Command-line front end: one config file, one subcommand per run.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "ssm/config.hpp"
#include "ssm/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"self-similar measure laboratory: certification and experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int threads_override = -1;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "JSON run configuration file");
  app.add_option("--out", out_override, "output directory (overrides config)");
  app.add_option("--threads", threads_override, "worker thread cap (overrides config)");
  app.add_option("--seed", seed_override, "random seed (overrides config)")
      ->each([&](const std::string&) { seed_given = true; });

  auto* cmd_verify = app.add_subcommand("verify", "certify the algebraic foundation");
  auto* cmd_build = app.add_subcommand("build", "search translations and write ifs.json");
  auto* cmd_certify =
      app.add_subcommand("certify-bound", "certify the uniform transform lower bound c");

  double xi_re = 0.0, xi_im = 0.0;
  auto* cmd_fourier = app.add_subcommand("fourier", "evaluate the transform at one point");
  cmd_fourier->add_option("--xi-re", xi_re, "frequency, real part")->required();
  cmd_fourier->add_option("--xi-im", xi_im, "frequency, imaginary part");

  long scan_dirs = 64, scan_radii = 48;
  double scan_rmin = 1e3, scan_rmax = 1e6;
  auto* cmd_scan = app.add_subcommand("scan", "sup |F| over a direction/radius grid");
  cmd_scan->add_option("--dirs", scan_dirs, "number of directions");
  cmd_scan->add_option("--rmin", scan_rmin, "smallest radius");
  cmd_scan->add_option("--rmax", scan_rmax, "largest radius");
  cmd_scan->add_option("--radii", scan_radii, "radii per direction");

  long sample_count = 1000000;
  int sample_depth = 40;
  auto* cmd_sample = app.add_subcommand("sample", "draw points and dump samples.pslm");
  cmd_sample->add_option("--count", sample_count, "number of points");
  cmd_sample->add_option("--depth", sample_depth, "digit expansion depth");

  double wiener_dir = 0.0, wiener_M = 1e4;
  auto* cmd_wiener =
      app.add_subcommand("wiener", "window average of |F|^2 along one direction");
  cmd_wiener->add_option("--direction", wiener_dir, "direction angle in radians")->required();
  cmd_wiener->add_option("--M", wiener_M, "window half-length");

  double slice_dir = std::numeric_limits<double>::quiet_NaN();
  long slice_eta = -1;
  int slice_nmax = 10;
  double slice_delta = 0.0;
  long slice_samples = 1000000;
  auto* cmd_slice = app.add_subcommand("slice", "band-disintegration statistics");
  cmd_slice->add_option("--direction", slice_dir, "direction angle in radians");
  cmd_slice->add_option("--eta", slice_eta,
                        "use the k-th power of the distinguished unit direction");
  cmd_slice->add_option("--nmax", slice_nmax, "number of slice frequencies");
  cmd_slice->add_option("--delta", slice_delta,
                        "band half-width (default: the |lambda|^{4,6,8} ladder)");
  cmd_slice->add_option("--samples", slice_samples, "Monte Carlo sample count");

  auto* cmd_report = app.add_subcommand("report", "write a summary of certified quantities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help or the parse error
    return (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
               ? ssm::cli::exit_ok
               : ssm::cli::exit_usage;
  }

  ssm::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = ssm::cli::load_run_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (threads_override > 0) cfg.threads = threads_override;
    if (seed_given) cfg.seed = seed_override;
    ssm::cli::validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return ssm::cli::exit_usage;
  }

  std::ostream& log = std::cout;
  if (cmd_verify->parsed()) return ssm::cli::run_verify(cfg, log);
  if (cmd_build->parsed()) return ssm::cli::run_build(cfg, log);
  if (cmd_certify->parsed()) return ssm::cli::run_certify(cfg, log);
  if (cmd_fourier->parsed()) return ssm::cli::run_fourier_point(cfg, xi_re, xi_im, log);
  if (cmd_scan->parsed())
    return ssm::cli::run_scan(cfg, scan_dirs, scan_rmin, scan_rmax, scan_radii, log);
  if (cmd_sample->parsed()) return ssm::cli::run_sample(cfg, sample_count, sample_depth, log);
  if (cmd_wiener->parsed()) return ssm::cli::run_wiener(cfg, wiener_dir, wiener_M, log);
  if (cmd_slice->parsed())
    return ssm::cli::run_slice(cfg, slice_dir, slice_eta, slice_nmax, slice_delta,
                               slice_samples, log);
  if (cmd_report->parsed()) return ssm::cli::run_report(cfg, log);
  return ssm::cli::exit_usage;
}
