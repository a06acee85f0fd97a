#include <catch2/catch_amalgamated.hpp>

#include "ssm/ifs.hpp"
#include "ssm/rng.hpp"

using ssm::BigInt;
using ssm::HComplex;
using ssm::Real;
using ssm::to_double;
using ssm::algebraic::MonicIntPolynomial;
using ssm::algebraic::PisotContext;
using namespace ssm::construction;

static const PisotContext& default_ctx() {
  static auto ctx = PisotContext::make(MonicIntPolynomial::parse("1,10,1,1"), 60);
  return ctx;
}

TEST_CASE("Y approximation: zero target is exact") {
  auto r = approximate_in_Y(default_ctx(), HComplex(Real(0), Real(0)), Real("1e-6"));
  CHECK(r.element.k == 0);
  CHECK(r.element.l == 0);
  CHECK(r.distance == 0);
}

TEST_CASE("Y approximation: targets already in Y are hit exactly") {
  const auto& ctx = default_ctx();
  const HComplex lam = ctx.lambda();
  auto r = approximate_in_Y(ctx, lam * lam * lam, Real("1e-6"));
  CHECK(r.element.k == 1);
  CHECK(r.element.l == 3);
  CHECK(to_double(r.distance) < 1e-60);

  auto r2 = approximate_in_Y(ctx, 2 * lam, Real("1e-6"));
  CHECK(r2.element.k == 2);
  CHECK(r2.element.l == 1);

  auto r3 = approximate_in_Y(ctx, HComplex(Real(1), Real(0)), Real("1e-6"));
  CHECK(r3.element.k == 1);
  CHECK(r3.element.l == 0);
}

TEST_CASE("Y approximation: 2/3 at three tolerance levels") {
  const auto& ctx = default_ctx();
  const HComplex target(Real(2) / 3, Real(0));
  long prev_l = -1;
  for (const char* eps_str : {"1e-1", "1e-2", "1e-3"}) {
    const Real eps(eps_str);
    auto r = approximate_in_Y(ctx, target, eps);
    CHECK(r.distance < eps);
    // the returned element reproduces its own value
    CHECK(to_double(abs(r.element.value(ctx) - target)) < to_double(eps));
    // determinism: a second identical call returns the same element
    auto again = approximate_in_Y(ctx, target, eps);
    CHECK(again.element == r.element);
    prev_l = r.element.l;
  }
  CHECK(prev_l >= 1);
}

TEST_CASE("Y approximation: random targets stay within eps") {
  const auto& ctx = default_ctx();
  auto rng = ssm::stream_for(42, 7);
  int count = 0;
  for (int i = 0; i < 100; ++i) {
    const double re = -2.0 + 4.0 * ssm::uniform01(rng.next());
    const double im = -2.0 + 4.0 * ssm::uniform01(rng.next());
    if (re * re + im * im > 4.0 || re * re + im * im < 1e-6) continue;
    ++count;
    const HComplex target{Real(re), Real(im)};
    for (const char* eps_str : {"1e-1", "1e-2", "1e-3"}) {
      const Real eps(eps_str);
      auto r = approximate_in_Y(ctx, target, eps);
      CHECK(r.distance < eps);
      CHECK(to_double(abs(r.element.value(ctx) - target)) < to_double(eps));
    }
  }
  CHECK(count > 50);
}

TEST_CASE("Y approximation: exhausted budget reports the best candidate") {
  const auto& ctx = default_ctx();
  try {
    approximate_in_Y(ctx, HComplex(Real(2) / 3, Real(0)), Real("1e-3"), 2);
    FAIL("expected YSearchError");
  } catch (const YSearchError& e) {
    CHECK(e.best_found.l <= 2);
    CHECK(e.achieved_distance >= Real("1e-3"));
    CHECK(std::string(e.what()).find("best") != std::string::npos);
  }
  CHECK_THROWS_AS(approximate_in_Y(ctx, HComplex(Real(1), Real(0)), Real(0)), std::invalid_argument);
}

TEST_CASE("separation: hand-checkable anchor pair certifies at depth 1") {
  const auto& ctx = default_ctx();
  const HComplex a1(Real(2) / 3, Real(0));
  const HComplex a2(Real(0), Real(2) / 3);
  auto cert = certify_ssc_values(ctx.lambda(), a1, a2, 5);
  REQUIRE(cert.has_value());
  CHECK(cert->depth == 1);
  // min center distance (2/3)*sqrt2 minus twice the hull radius |lambda|*R
  CHECK(to_double(cert->min_gap) == Catch::Approx(0.3220663).epsilon(1e-3));
}

TEST_CASE("separation: coincident translations stay inconclusive") {
  const auto& ctx = default_ctx();
  const HComplex a(Real(1), Real(0));
  auto cert = certify_ssc_values(ctx.lambda(), a, a, 3);
  CHECK_FALSE(cert.has_value());
}

TEST_CASE("separation: input validation") {
  const auto& ctx = default_ctx();
  const HComplex a(Real(1), Real(0));
  CHECK_THROWS_AS(certify_ssc_values(ctx.lambda(), a, a, 0), std::invalid_argument);
  CHECK_THROWS_AS(certify_ssc_values(ctx.lambda(), a, a, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(certify_ssc_values(HComplex(Real(2), Real(0)), a, a, 3), std::domain_error);
}

TEST_CASE("default build produces the exact pair (1, 2*lambda)") {
  const auto& ctx = default_ctx();
  auto cfg = build_default_ifs(ctx, Real(1) / 4);
  CHECK(cfg.a1 == (YElement{BigInt(1), 0}));
  CHECK(cfg.a2 == (YElement{BigInt(2), 1}));
  CHECK(to_double(abs(cfg.a1_value - HComplex(Real(1), Real(0)))) < 1e-50);
  CHECK(to_double(abs(cfg.a2_value - 2 * ctx.lambda())) < 1e-50);
  REQUIRE(cfg.ssc_certificate.has_value());
  CHECK(cfg.ssc_certificate->depth == 1);
  CHECK(to_double(cfg.ssc_certificate->min_gap) == Catch::Approx(0.174369).epsilon(1e-3));
  CHECK(cfg.ssc_certificate->min_gap > 0);

  // maps keep the invariant ball invariant: |lambda|*R + |a| <= R
  const Real lam_abs = abs(ctx.lambda());
  for (const auto& t : cfg.translations())
    CHECK(lam_abs * cfg.attractor_radius + abs(t) <= cfg.attractor_radius * (Real(1) + Real("1e-40")));
  CHECK(to_double(cfg.attractor_radius) == Catch::Approx(1.4655929).epsilon(1e-4));
}

TEST_CASE("default build validates eps_fraction") {
  const auto& ctx = default_ctx();
  CHECK_THROWS_AS(build_default_ifs(ctx, Real(0)), std::invalid_argument);
  CHECK_THROWS_AS(build_default_ifs(ctx, Real(1)), std::invalid_argument);
  CHECK_THROWS_AS(build_default_ifs(ctx, Real("1.5")), std::invalid_argument);
}

TEST_CASE("separation certificates persist at deeper levels") {
  const auto& ctx = default_ctx();
  auto cfg = build_default_ifs(ctx, Real(1) / 4);
  for (int depth = 2; depth <= 4; ++depth) {
    auto cert = certify_ssc(cfg, depth, depth);
    REQUIRE(cert.has_value());
    CHECK(cert->depth == depth);
    CHECK(cert->min_gap > 0);
  }
}

TEST_CASE("config rejects degenerate Y elements") {
  const auto& ctx = default_ctx();
  CHECK_THROWS_AS(IFSConfig::make(ctx, YElement{BigInt(0), 0}, YElement{BigInt(2), 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(IFSConfig::make(ctx, YElement{BigInt(1), -1}, YElement{BigInt(2), 1}),
                  std::invalid_argument);
}

TEST_CASE("dimension formula and certified dimension") {
  CHECK(to_double(dimension_from_modulus(Real(4))) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(to_double(dimension_from_modulus(Real(2))) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(dimension_from_modulus(Real(1)), std::domain_error);
  CHECK_THROWS_AS(dimension_from_modulus(Real("0.5")), std::domain_error);

  const auto& ctx = default_ctx();
  auto cfg = build_default_ifs(ctx, Real(1) / 4);
  auto dim = hausdorff_dimension(cfg);
  CHECK(to_double(dim.value) == Catch::Approx(1.2089).epsilon(1e-3));
  CHECK(dim.value - dim.error > 1);
  CHECK(dim.value + dim.error < Real("1.262"));
  CHECK(to_double(dim.error) < 1e-55);

  auto no_cert = IFSConfig::make(ctx, cfg.a1, cfg.a2);
  CHECK_THROWS_AS(hausdorff_dimension(no_cert), std::domain_error);
}
