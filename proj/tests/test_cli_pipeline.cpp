#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ssm/config.hpp"
#include "ssm/io.hpp"
#include "ssm/pipeline.hpp"

using ssm::Real;
using namespace ssm::cli;

namespace fs = std::filesystem;

static std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("run config parsing whitelists keys and validates ranges") {
  const RunConfig def = parse_run_config("{}");
  CHECK(def.polynomial == "1,10,1,1");
  CHECK(def.precision_digits == 50);
  CHECK(def.eps_fraction == 0.25);
  CHECK(def.tail_tol == 1e-12);
  CHECK(def.seed == 1);
  CHECK(def.threads == 1);

  const RunConfig full = parse_run_config(
      R"({"polynomial":"1,10,1,1","precision_digits":60,"eps_fraction":0.3,
          "tail_tol":1e-10,"seed":42,"out_dir":"x","threads":2})");
  CHECK(full.precision_digits == 60);
  CHECK(full.seed == 42);
  CHECK(full.out_dir == "x");

  CHECK_THROWS_AS(parse_run_config(R"({"bogus":1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"seed":"one"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"precision_digits":20})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"precision_digits":181})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"eps_fraction":0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"eps_fraction":1})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"tail_tol":0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"threads":0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(R"({"threads":300})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config("not json"), std::invalid_argument);

  // the hash covers exactly the semantic keys
  CHECK(canonical_string(def) ==
        "polynomial=1,10,1,1;precision_digits=50;eps_fraction=0.25;"
        "tail_tol=9.9999999999999998e-13;seed=1;");
  RunConfig other = def;
  other.out_dir = "elsewhere";
  other.threads = 4;
  CHECK(config_hash(other) == config_hash(def));
  other.seed = 2;
  CHECK(config_hash(other) != config_hash(def));
}

TEST_CASE("pslm round trip") {
  const fs::path dir = fs::temp_directory_path() / "ssm_pslm_test";
  fs::create_directories(dir);
  const std::string path = (dir / "pts.pslm").string();

  std::vector<std::complex<double>> pts = {{1.5, -2.25}, {0.0, 0.0}, {-3e-20, 4e19}};
  write_pslm(path, pts);
  CHECK(fs::file_size(path) == 16 + pts.size() * 16);
  CHECK(read_pslm(path) == pts);

  write_pslm(path, {});
  CHECK(read_pslm(path).empty());

  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOPE............";
  }
  CHECK_THROWS_AS(read_pslm(path), std::runtime_error);
  {
    std::ofstream bad(path, std::ios::binary);
    char header[16] = {'P', 'S', 'L', 'M'};
    const std::uint32_t version = pslm_version;
    const std::uint64_t count = 5;  // promises more than the file holds
    std::memcpy(header + 4, &version, 4);
    std::memcpy(header + 8, &count, 8);
    bad.write(header, sizeof header);
  }
  CHECK_THROWS_AS(read_pslm(path), std::runtime_error);
  CHECK_THROWS_AS(read_pslm((dir / "missing.pslm").string()), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("ifs json round trip and tamper detection") {
  const fs::path dir = fs::temp_directory_path() / "ssm_ifs_test";
  fs::create_directories(dir);
  const std::string path = (dir / "ifs.json").string();

  auto ctx = ssm::algebraic::PisotContext::make(
      ssm::algebraic::MonicIntPolynomial::parse("1,10,1,1"), 50);
  auto ifs = ssm::construction::build_default_ifs(ctx, Real(1) / 4);
  write_ifs_json(path, ifs, 0.25, "deadbeef00000000");

  const auto back = load_ifs_json(path);
  CHECK(back.a1 == ifs.a1);
  CHECK(back.a2 == ifs.a2);
  CHECK(back.ctx.precision_digits() == 50);
  REQUIRE(back.ssc_certificate.has_value());
  CHECK(back.ssc_certificate->depth == ifs.ssc_certificate->depth);
  CHECK(ssm::to_double(abs(back.ssc_certificate->min_gap - ifs.ssc_certificate->min_gap)) <
        1e-20);

  // tampered min_gap no longer matches the recomputation
  {
    std::string text = slurp(path);
    const auto pos = text.find("0.17");
    REQUIRE(pos != std::string::npos);
    text[pos + 3] = '9';
    std::ofstream out(path);
    out << text;
  }
  CHECK_THROWS_AS(load_ifs_json(path), std::runtime_error);

  CHECK_THROWS_AS(load_ifs_json((dir / "missing.json").string()), std::invalid_argument);

  // a config without certificate cannot be persisted
  auto bare = ssm::construction::IFSConfig::make(ifs.ctx, ifs.a1, ifs.a2);
  CHECK_THROWS_AS(write_ifs_json(path, bare, 0.25, "00"), std::domain_error);
  fs::remove_all(dir);
}

TEST_CASE("pipeline subcommands: exit codes and reproducible artifacts") {
  const fs::path dir = fs::temp_directory_path() / "ssm_pipeline_test";
  fs::remove_all(dir);
  RunConfig cfg;
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;

  SECTION("verify") {
    CHECK(run_verify(cfg, log) == exit_ok);
    CHECK(log.str().find("all checks certified") != std::string::npos);

    RunConfig bad = cfg;
    bad.polynomial = "-2,0,1";  // real roots
    std::ostringstream blog;
    CHECK(run_verify(bad, blog) == exit_certification);

    RunConfig garbled = cfg;
    garbled.polynomial = "1,x,1";
    std::ostringstream glog;
    CHECK(run_verify(garbled, glog) == exit_usage);
  }

  SECTION("experiments are gated on build") {
    std::ostringstream elog;
    CHECK(run_certify(cfg, elog) == exit_usage);  // no ifs.json yet
    CHECK(elog.str().find("build") != std::string::npos);
  }

  SECTION("build, certify, experiments, determinism") {
    REQUIRE(run_build(cfg, log) == exit_ok);
    CHECK(log.str().find("dim = 1.2089") != std::string::npos);
    const std::string ifs1 = slurp(dir / "out" / "ifs.json");
    REQUIRE(run_build(cfg, log) == exit_ok);
    CHECK(slurp(dir / "out" / "ifs.json") == ifs1);  // byte-identical rebuild

    REQUIRE(run_certify(cfg, log) == exit_ok);
    const std::string cert1 = slurp(dir / "out" / "certify.csv");
    long rows = 0, above = 0;
    {
      std::istringstream in(cert1);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'N') continue;
        ++rows;
        if (line.size() >= 2 && line[line.size() - 1] == '1' && line[line.size() - 2] == ',')
          ++above;
      }
    }
    CHECK(rows == 31);
    CHECK(above == 31);

    CHECK(run_fourier_point(cfg, 10.0, 3.0, log) == exit_ok);
    CHECK(log.str().find("0.0066478741926") != std::string::npos);

    CHECK(run_scan(cfg, 8, 1e3, 1e5, 6, log) == exit_ok);
    const std::string scan1 = slurp(dir / "out" / "scan.csv");
    CHECK(run_scan(cfg, 8, 1e3, 1e5, 6, log) == exit_ok);
    CHECK(slurp(dir / "out" / "scan.csv") == scan1);

    CHECK(run_sample(cfg, 5000, 40, log) == exit_ok);
    CHECK(read_pslm((dir / "out" / "samples.pslm").string()).size() == 5000);

    CHECK(run_wiener(cfg, 1.0, 100.0, log) == exit_ok);

    CHECK(run_slice(cfg, std::numeric_limits<double>::quiet_NaN(), 10, 2, 0.01, 20000, log) ==
          exit_ok);
    const std::string slice1 = slurp(dir / "out" / "slice.csv");
    long slice_rows = 0;
    {
      std::istringstream in(slice1);
      std::string line;
      while (std::getline(in, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'd') ++slice_rows;
    }
    CHECK(slice_rows == 2);  // one delta, two frequencies
    CHECK(run_slice(cfg, std::numeric_limits<double>::quiet_NaN(), 10, 2, 0.01, 20000, log) ==
          exit_ok);
    CHECK(slurp(dir / "out" / "slice.csv") == slice1);

    // direction and eta are mutually exclusive
    std::ostringstream xlog;
    CHECK(run_slice(cfg, 1.0, -1, 2, 0.01, 20000, xlog) == exit_ok);
    CHECK(run_slice(cfg, 1.0, 3, 2, 0.01, 20000, xlog) == exit_usage);

    CHECK(run_report(cfg, log) == exit_ok);
    const std::string rep = slurp(dir / "out" / "report.txt");
    CHECK(rep.find("c = 0.00214116597947808") != std::string::npos);
    CHECK(rep.find("dim = 1.2089") != std::string::npos);
  }

  fs::remove_all(dir);
}
