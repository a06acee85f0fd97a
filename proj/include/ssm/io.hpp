#pragma once

// File formats: PSLM point dumps (16-byte header + little-endian f64 pairs),
// CSV reports with "# " comment headers, and the ifs.json build artifact that
// later subcommands consume.  Nothing here writes timestamps, so identical
// inputs give byte-identical files.

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssm/common.hpp"
#include "ssm/ifs.hpp"

namespace ssm::cli {

static_assert(std::endian::native == std::endian::little,
              "PSLM writer assumes a little-endian host");

inline constexpr std::uint32_t pslm_version = 1;

inline void write_pslm(const std::string& path,
                       const std::vector<std::complex<double>>& pts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("write_pslm: cannot open " + path);
  char header[16] = {'P', 'S', 'L', 'M'};
  const std::uint32_t version = pslm_version;
  const std::uint64_t count = pts.size();
  std::memcpy(header + 4, &version, 4);
  std::memcpy(header + 8, &count, 8);
  out.write(header, sizeof header);
  static_assert(sizeof(std::complex<double>) == 16);
  if (!pts.empty())
    out.write(reinterpret_cast<const char*>(pts.data()),
              static_cast<std::streamsize>(pts.size() * sizeof(std::complex<double>)));
  if (!out) throw std::runtime_error("write_pslm: write failed on " + path);
}

inline std::vector<std::complex<double>> read_pslm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("read_pslm: cannot open " + path);
  char header[16];
  in.read(header, sizeof header);
  if (!in || std::memcmp(header, "PSLM", 4) != 0)
    throw std::runtime_error("read_pslm: bad magic in " + path);
  std::uint32_t version = 0;
  std::uint64_t count = 0;
  std::memcpy(&version, header + 4, 4);
  std::memcpy(&count, header + 8, 8);
  if (version != pslm_version)
    throw std::runtime_error("read_pslm: unsupported version in " + path);
  std::vector<std::complex<double>> pts(count);
  if (count > 0)
    in.read(reinterpret_cast<char*>(pts.data()),
            static_cast<std::streamsize>(count * sizeof(std::complex<double>)));
  if (!in) throw std::runtime_error("read_pslm: truncated file " + path);
  return pts;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::invalid_argument("csv: cannot open " + path);
  }
  void comment(const std::string& line) { out_ << "# " << line << "\n"; }
  void line(const std::string& raw) { out_ << raw << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }
  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  ~CsvWriter() { out_.flush(); }

 private:
  std::ofstream out_;
};

// ---- build artifact ----------------------------------------------------

inline std::string real_to_string(const Real& v, unsigned digits = 30) {
  return v.str(static_cast<std::streamsize>(digits));
}

// constant-first coefficient list, the same shape the parser accepts
inline std::string coeff_csv(const algebraic::MonicIntPolynomial& p) {
  std::ostringstream ss;
  for (int i = 0; i <= p.degree(); ++i) {
    if (i) ss << ",";
    ss << p.coeff(i).str();
  }
  return ss.str();
}

inline void write_ifs_json(const std::string& path, const construction::IFSConfig& cfg,
                           double eps_fraction, const std::string& cfg_hash_hex) {
  if (!cfg.ssc_certificate)
    throw std::domain_error("write_ifs_json: separation certificate required");
  nlohmann::ordered_json j;
  j["format"] = "ssm-ifs-v1";
  j["config_hash"] = cfg_hash_hex;
  j["polynomial"] = coeff_csv(cfg.ctx.poly());
  j["precision_digits"] = cfg.ctx.precision_digits();
  j["eps_fraction"] = eps_fraction;
  j["a1"] = {{"k", cfg.a1.k.str()}, {"l", cfg.a1.l}};
  j["a2"] = {{"k", cfg.a2.k.str()}, {"l", cfg.a2.l}};
  j["separation"] = {{"depth", cfg.ssc_certificate->depth},
                     {"min_gap", real_to_string(cfg.ssc_certificate->min_gap)}};
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_ifs_json: cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write_ifs_json: write failed on " + path);
}

// Rebuilds the context from the stored data and re-certifies separation at
// the stored depth; a file whose certificate cannot be reproduced is rejected.
inline construction::IFSConfig load_ifs_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_ifs_json: cannot open " + path +
                                       " (run the build subcommand first)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_ifs_json: invalid JSON in " + path + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "ssm-ifs-v1")
      throw std::runtime_error("load_ifs_json: unknown format tag");
    auto ctx = algebraic::PisotContext::make(
        algebraic::MonicIntPolynomial::parse(j.at("polynomial").get<std::string>()),
        j.at("precision_digits").get<int>());
    const construction::YElement a1{BigInt(j.at("a1").at("k").get<std::string>()),
                                    j.at("a1").at("l").get<long>()};
    const construction::YElement a2{BigInt(j.at("a2").at("k").get<std::string>()),
                                    j.at("a2").at("l").get<long>()};
    auto cfg = construction::IFSConfig::make(std::move(ctx), a1, a2);
    const int depth = j.at("separation").at("depth").get<int>();
    const Real stored_gap(j.at("separation").at("min_gap").get<std::string>());
    const auto cert = construction::certify_ssc(cfg, depth, depth);
    if (!cert) throw PrecisionError("load_ifs_json: stored separation certificate not reproducible");
    if (!(abs(cert->min_gap - stored_gap) <= abs(stored_gap) * Real("1e-9")))
      throw std::runtime_error("load_ifs_json: stored min_gap does not match recomputation");
    cfg.ssc_certificate = *cert;
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_ifs_json: missing or mistyped field in " + path + ": " +
                             e.what());
  }
}

}  // namespace ssm::cli
