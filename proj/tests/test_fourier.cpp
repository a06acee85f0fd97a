#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ssm/fourier.hpp"
#include "ssm/rng.hpp"

using ssm::BigInt;
using ssm::HComplex;
using ssm::PrecisionError;
using ssm::Real;
using ssm::to_double;
using ssm::algebraic::MonicIntPolynomial;
using ssm::algebraic::PisotContext;
using ssm::construction::build_default_ifs;
using ssm::construction::IFSConfig;
using ssm::construction::YElement;
using namespace ssm::fourier;

static const FourierEvaluator& default_ev() {
  static FourierEvaluator ev = [] {
    auto ctx = PisotContext::make(MonicIntPolynomial::parse("1,10,1,1"), 60);
    return FourierEvaluator(build_default_ifs(ctx, Real(1) / 4));
  }();
  return ev;
}

TEST_CASE("evaluator constants") {
  const auto& ev = default_ev();
  CHECK(to_double(ev.C0()) == Catch::Approx(137.52255373928941).epsilon(1e-10));
  CHECK(ev.M_cut() == 5);
  CHECK(ev.M_tail() == 29);
  CHECK(to_double(ev.tail_tol()) == Catch::Approx(1e-12));
}

TEST_CASE("evaluator input validation") {
  auto ctx = PisotContext::make(MonicIntPolynomial::parse("1,10,1,1"), 40);
  auto cfg = build_default_ifs(ctx, Real(1) / 4);
  CHECK_THROWS_AS(FourierEvaluator(cfg, Real(0)), std::invalid_argument);
  CHECK_THROWS_AS(FourierEvaluator(cfg, Real(1)), std::invalid_argument);
  CHECK_THROWS_AS(FourierEvaluator(cfg, Real("1e-12"), 0), std::invalid_argument);
  CHECK_THROWS_AS(FourierEvaluator(cfg, Real("1e-12"), 500), std::invalid_argument);
  CHECK_THROWS_AS(FourierEvaluator(cfg, Real("1e-12"), 50, 4), std::invalid_argument);

  // bilateral machinery requires constant term +-1
  auto ctx2 = PisotContext::make(MonicIntPolynomial::parse("2,1,1"), 40);
  auto cfg2 = IFSConfig::make(ctx2, YElement{BigInt(1), 0}, YElement{BigInt(2), 1});
  CHECK_THROWS_AS(FourierEvaluator(cfg2), std::domain_error);
}

TEST_CASE("b-factors match the direct high-precision oracle") {
  const auto& ev = default_ev();
  const struct {
    long n;
    double expect;
  } oracle[] = {
      {-8, 0.99999976977147065}, {-7, 0.99999672068092504}, {-6, 0.99997027642780567},
      {-5, 0.99975076639606508}, {-4, 0.99639986339729325}, {-3, 0.98145261325987321},
      {-2, 0.64557761192405183}, {-1, 0.041341679382401908}, {0, 0.70872106980533578},
      {1, 0.90281103738710666},  {2, 0.64800366923882768},  {3, 0.99590073138682311},
      {4, 0.99995819690031951},  {5, 0.99999957427292863},  {6, 0.99999999566441056},
      {7, 0.99999999995584654},  {8, 0.99999999999955036},
  };
  for (const auto& row : oracle) {
    const auto f = ev.b_factor(row.n);
    CHECK(to_double(f.value) == Catch::Approx(row.expect).margin(1e-13));
    CHECK(f.margin > Real("0.01"));
    CHECK(f.value_err < Real("1e-60"));
  }
}

TEST_CASE("b-factors respect the decay minorant beyond the cut") {
  const auto& ev = default_ev();
  const Real rho = ev.config().ctx.rho();
  for (long n = -40; n <= 40; ++n) {
    if (std::labs(n) < ev.M_cut()) continue;
    const auto f = ev.b_factor(n);
    CHECK(abs(f.value) >= 1 - ev.C0() * pow(rho, static_cast<int>(std::labs(n))));
  }
}

TEST_CASE("product form agrees with the half-sum form") {
  const auto& ev = default_ev();
  const auto& cfg = ev.config();
  const Real two_pi = ssm::real_two_pi();
  for (long n = -6; n <= 6; ++n) {
    const auto& e1 = ev.u_decomposition(n - cfg.a1.l);
    const auto& e2 = ev.u_decomposition(n - cfg.a2.l);
    const Real h1 = ssm::frac_centered(Real(cfg.a1.k) * e1.frac).frac;
    const Real h2 = ssm::frac_centered(Real(cfg.a2.k) * e2.frac).frac;
    const Real sum_form = (cos(two_pi * h1) + cos(two_pi * h2)) / 2;
    CHECK(abs(ev.b_factor(n).value - sum_form) < Real("1e-220"));
  }
}

TEST_CASE("u decomposition sanity at hand-checkable indices") {
  const auto& ev = default_ev();
  // u_0 = 2, exactly: frac 0, integer 2
  const auto& e0 = ev.u_decomposition(0);
  CHECK(e0.integer == 2);
  CHECK(abs(e0.frac) < Real("1e-80"));
  // u_1 = 2 Re theta = -0.899084...: integer -1, frac +0.100915...
  const auto& e1 = ev.u_decomposition(1);
  CHECK(e1.integer == -1);
  CHECK(to_double(e1.frac) == Catch::Approx(0.10091562422072937).epsilon(1e-12));
  // u_{-1} = 2 Re lambda = -0.0907...: integer 0
  const auto& em1 = ev.u_decomposition(-1);
  CHECK(em1.integer == 0);
  CHECK(to_double(em1.frac) == Catch::Approx(-0.090731661008869910).epsilon(1e-12));
  CHECK_THROWS_AS(ev.u_decomposition(1025), std::out_of_range);
  CHECK_THROWS_AS(ev.u_decomposition(-1025), std::out_of_range);
}

TEST_CASE("transform at distinguished points") {
  const auto& ev = default_ev();
  auto zero = ev.transform(HComplex(Real(0), Real(0)));
  CHECK(zero.value.real() == 1);
  CHECK(zero.value.imag() == 0);
  CHECK(zero.error < Real("1e-11"));

  auto one = ev.transform(HComplex(Real(1), Real(0)));
  // pinned against a 120-factor oracle run; the evaluator truncates at tail_tol
  CHECK(to_double(one.value.real()) == Catch::Approx(0.75850069486946525).margin(2e-12));
  CHECK(one.value.imag() == 0);

  auto p = ev.transform(HComplex(Real(10), Real(3)));
  CHECK(to_double(p.value.real()) == Catch::Approx(0.0066478741926970942).margin(1e-13));

  // symmetry: the +- translation pairs make the transform real and even
  auto m = ev.transform(HComplex(Real(-10), Real(-3)));
  CHECK(abs(m.value - p.value) < Real("1e-200"));
}

TEST_CASE("transform modulus bound and self-similarity refinement") {
  const auto& ev = default_ev();
  const auto& cfg = ev.config();
  const HComplex lam_bar = conj(cfg.ctx.lambda());
  auto rng = ssm::stream_for(2026, 3);
  for (int i = 0; i < 1000; ++i) {
    const double r = std::pow(10.0, 6.0 * ssm::uniform01(rng.next()));
    const double a = 6.283185307179586 * ssm::uniform01(rng.next());
    const HComplex xi{Real(r * std::cos(a)), Real(r * std::sin(a))};
    const auto s = ev.transform(xi);
    REQUIRE(abs(s.value) <= 1 + s.error);
    CHECK(s.value.imag() == 0);

    // F(xi) = F(conj(lambda) xi) * (cos Re(a1 conj(xi)) + cos Re(a2 conj(xi)))/2
    const auto inner = ev.transform(lam_bar * xi);
    const Real g = (cos((cfg.a1_value * conj(xi)).real()) +
                    cos((cfg.a2_value * conj(xi)).real())) /
                   2;
    CHECK(abs(s.value - inner.value * g) <= 2 * (s.error + inner.error) + Real("1e-50"));
  }
}

TEST_CASE("tail tolerance consistency") {
  auto ctx = PisotContext::make(MonicIntPolynomial::parse("1,10,1,1"), 60);
  auto cfg = build_default_ifs(ctx, Real(1) / 4);
  FourierEvaluator coarse(cfg, Real("1e-8"));
  FourierEvaluator fine(cfg, Real("1e-12"));
  for (double re : {1.0, 35.0, 1234.5}) {
    const HComplex xi{Real(re), Real(re / 3)};
    const auto s1 = coarse.transform(xi);
    const auto s2 = fine.transform(xi);
    CHECK(abs(s1.value - s2.value) <= Real("1e-8") + Real("1e-12"));
  }
}

TEST_CASE("bilateral Pisot products match the oracle") {
  const auto& ev = default_ev();
  const double oracle[] = {0.018492354450090367,  0.016695101704816164, 0.010818487163036281,
                           0.010774139278166788,  0.010773688885748572, 0.010773684299097554,
                           0.010773684252387283,  0.010773684251911587, 0.010773684251906742,
                           0.010773684251906694,  0.010773684251906692};
  for (long N = 0; N <= 10; ++N) {
    const auto s = ev.transform_pisot(N);
    CHECK(to_double(s.value.real()) == Catch::Approx(oracle[N]).epsilon(1e-12));
    CHECK(s.value.imag() == 0);
    CHECK(s.error < Real("1e-11"));
  }
  double minabs = 1e9;
  for (long N = 0; N <= 30; ++N)
    minabs = std::min(minabs, std::abs(to_double(ev.transform_pisot(N).value.real())));
  CHECK(minabs == Catch::Approx(0.010773684251906692).epsilon(1e-12));

  CHECK_THROWS_AS(ev.transform_pisot(-1), std::invalid_argument);
  CHECK_THROWS_AS(ev.transform_pisot(1024), std::out_of_range);
}

TEST_CASE("unilateral and bilateral evaluations agree at Pisot frequencies") {
  const auto& ev = default_ev();
  for (long N : {0L, 1L, 5L, 8L}) {
    const auto bi = ev.transform_pisot(N);
    const auto uni = ev.transform(bi.xi);
    CHECK(abs(bi.value - uni.value) <= bi.error + uni.error);
  }
}

TEST_CASE("pisot frequency geometry") {
  const auto& ev = default_ev();
  const auto& ctx = ev.config().ctx;
  CHECK(to_double(abs(ev.pisot_frequency(0)) - 4 * ssm::real_pi()) == Catch::Approx(0.0).margin(1e-30));
  CHECK(ev.pisot_frequency(1).imag() < 0);  // conj(theta) in the lower half plane
  const Real expect = 4 * ssm::real_pi() * pow(ctx.theta_abs(), 5);
  CHECK(to_double(abs(ev.pisot_frequency(5)) / expect) == Catch::Approx(1.0).epsilon(1e-20));
  CHECK_THROWS_AS(ev.pisot_frequency(-1), std::invalid_argument);
}

TEST_CASE("certified lower bound matches the oracle and stays below the products") {
  const auto& ev = default_ev();
  const auto bound = ev.certify_lower_bound();
  CHECK(bound.c > 0);
  CHECK(to_double(bound.c) == Catch::Approx(0.0021411659794780837).epsilon(1e-12));
  CHECK(bound.M_cut == 5);
  CHECK(bound.M_explicit == 13);
  CHECK(to_double(bound.central_product) == Catch::Approx(0.010776733318244429).epsilon(1e-12));
  CHECK(to_double(bound.tail_product) == Catch::Approx(0.19873789063061365).epsilon(1e-12));
  CHECK(to_double(bound.tail_exp_bound) == Catch::Approx(0.99972953455639579).epsilon(1e-12));
  CHECK(bound.central_factors.size() == 9);

  for (long N = 0; N <= 30; ++N) {
    const auto s = ev.transform_pisot(N);
    CHECK(abs(s.value) - s.error > bound.c);
  }
}

TEST_CASE("inflating the explicit range only tightens the bound") {
  const auto& ev = default_ev();
  const Real c = ev.certify_lower_bound().c;
  const Real cp = ev.certify_lower_bound(5).c;
  CHECK(cp >= c * (1 - Real("1e-20")));
  CHECK(cp <= c * Real("5.1"));
  CHECK_THROWS_AS(ev.certify_lower_bound(-1), std::invalid_argument);
}

TEST_CASE("forced half-integer argument is rejected") {
  CHECK_THROWS_AS(detail::checked_signed_cos_pi(BigInt(0), Real(1) / 2, Real(0),
                                                ssm::precision_threshold(50), "test"),
                  PrecisionError);
  CHECK_THROWS_AS(detail::checked_signed_cos_pi(BigInt(3), Real("-0.4999999"), Real("1e-3"),
                                                ssm::precision_threshold(50), "test"),
                  PrecisionError);
  CHECK(detail::signed_cos_pi(BigInt(0), Real(0)) == 1);
  CHECK(detail::signed_cos_pi(BigInt(1), Real(0)) == -1);
  CHECK(detail::signed_cos_pi(BigInt(-1), Real(0)) == -1);
  CHECK(to_double(detail::signed_cos_pi(BigInt(2), Real(1) / 3)) == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("direction scan finds the Pisot witnesses") {
  const auto& ev = default_ev();
  const Real c = ev.certify_lower_bound().c;
  auto rows = scan_directions(ev, 8, Real(1000), Real(100000), 4, c);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    CHECK(row.sup_modulus <= 1.0 + 1e-6);
    CHECK(row.best_radius >= 1000.0 * (1.0 - 1e-12));
  }

  // special radii 4 pi |theta|^k inside [1e3, 1e5]: k = 4..7; their snapped rows certify
  const double arg_theta = to_double(ev.config().ctx.theta_arg());
  const double two_pi = 6.283185307179586476925287;
  for (long k = 4; k <= 7; ++k) {
    double a = std::fmod(-static_cast<double>(k) * arg_theta, two_pi);
    if (a < 0) a += two_pi;
    const long idx = std::llround(a / (two_pi / 8.0)) % 8;
    INFO("k=" << k << " idx=" << idx);
    CHECK(rows[static_cast<std::size_t>(idx)].exceeds_c == 1);
    CHECK(rows[static_cast<std::size_t>(idx)].sup_modulus > to_double(c));
  }
}

TEST_CASE("direction scan input validation") {
  const auto& ev = default_ev();
  const Real c("0.002");
  CHECK_THROWS_AS(scan_directions(ev, 0, Real(10), Real(100), 2, c), std::invalid_argument);
  CHECK_THROWS_AS(scan_directions(ev, 4, Real(10), Real(100), 0, c), std::invalid_argument);
  CHECK_THROWS_AS(scan_directions(ev, 4, Real("0.5"), Real(100), 2, c), std::invalid_argument);
  CHECK_THROWS_AS(scan_directions(ev, 4, Real(100), Real(10), 2, c), std::invalid_argument);
  CHECK_THROWS_AS(scan_directions(ev, 4, Real(10), Real(100), 2, c, -1), std::invalid_argument);
}

TEST_CASE("direction orbit density saturates") {
  const auto& ctx = default_ev().config().ctx;
  const double f0 = direction_density(ctx, 4096, 0);
  const double f1 = direction_density(ctx, 4096, 20000);
  const double f2 = direction_density(ctx, 4096, 200000);
  CHECK(f0 < 0.001);
  CHECK(f1 >= 0.995);
  CHECK(f2 >= f1);
  CHECK_THROWS_AS(direction_density(ctx, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(direction_density(ctx, 16, -1), std::invalid_argument);
}
