#pragma once

// Run configuration: one small JSON file drives every subcommand.  The key
// set is a strict whitelist so typos fail loudly instead of silently running
// defaults.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ssm/common.hpp"

namespace ssm::cli {

struct RunConfig {
  std::string polynomial = "1,10,1,1";  // constant-first integer coefficients
  int precision_digits = 50;            // certification threshold exponent, in [30, 180]
  double eps_fraction = 0.25;           // translation search tolerance as a fraction of the gap
  double tail_tol = 1e-12;              // transform truncation tolerance
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 1;
};

inline void validate(const RunConfig& cfg) {
  if (cfg.polynomial.empty())
    throw std::invalid_argument("config: polynomial must be nonempty");
  if (cfg.precision_digits < 30 || cfg.precision_digits > 180)
    throw std::invalid_argument("config: precision_digits must lie in [30, 180]");
  if (!(cfg.eps_fraction > 0.0) || !(cfg.eps_fraction < 1.0))
    throw std::invalid_argument("config: eps_fraction must lie strictly in (0, 1)");
  if (!(cfg.tail_tol > 0.0) || !(cfg.tail_tol < 1.0))
    throw std::invalid_argument("config: tail_tol must lie strictly in (0, 1)");
  if (cfg.threads < 1 || cfg.threads > 256)
    throw std::invalid_argument("config: threads must lie in [1, 256]");
  if (cfg.out_dir.empty()) throw std::invalid_argument("config: out_dir must be nonempty");
}

inline RunConfig parse_run_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "polynomial")
        cfg.polynomial = value.get<std::string>();
      else if (key == "precision_digits")
        cfg.precision_digits = value.get<int>();
      else if (key == "eps_fraction")
        cfg.eps_fraction = value.get<double>();
      else if (key == "tail_tol")
        cfg.tail_tol = value.get<double>();
      else if (key == "seed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "out_dir")
        cfg.out_dir = value.get<std::string>();
      else if (key == "threads")
        cfg.threads = value.get<int>();
      else
        throw std::invalid_argument("config: unknown key \"" + key + "\"");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config: bad value for \"" + key + "\": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// stable serialization of the semantic keys (out_dir and threads do not
// influence computed values and stay out of the hash)
inline std::string canonical_string(const RunConfig& cfg) {
  std::ostringstream ss;
  ss << "polynomial=" << cfg.polynomial << ";precision_digits=" << cfg.precision_digits
     << ";eps_fraction=" << format_g17(cfg.eps_fraction)
     << ";tail_tol=" << format_g17(cfg.tail_tol) << ";seed=" << cfg.seed << ";";
  return ss.str();
}

inline std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a64(canonical_string(cfg));
}

}  // namespace ssm::cli
