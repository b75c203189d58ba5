#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>

#include "dpautogan/privacy/rdp.hpp"
#include "dpautogan/rng.hpp"

using namespace dpag;
using namespace dpag::privacy;

namespace {
constexpr double kAdultQ1 = 64.0 / 32561.0;
constexpr double kAdultQ3 = 128.0 / 32561.0;
}  // namespace

TEST_CASE("q equal to one collapses to the gaussian mechanism line") {
  for (int alpha : {2, 3, 17, 64, 256, 2048}) {
    for (double psi : {0.7, 1.0, 2.5}) {
      CHECK(rdp_subsampled_gaussian(1.0, psi, alpha) ==
            doctest::Approx(alpha / (2.0 * psi * psi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("order two matches the closed form and high precision values") {
  // At alpha = 2 the binomial sum collapses to
  // log(1 + q^2 (e^{1/psi^2} - 1)), an independent route.
  for (double q : {0.001, 0.01, 0.2, 0.37}) {
    for (double psi : {0.8, 1.5, 3.0}) {
      const double direct = std::log1p(q * q * std::expm1(1.0 / (psi * psi)));
      CHECK(rdp_subsampled_gaussian(q, psi, 2) ==
            doctest::Approx(direct).epsilon(1e-12));
    }
  }

  // Frozen 200-digit reference evaluations.
  CHECK(rdp_subsampled_gaussian(0.01, 1.2, 2) ==
        doctest::Approx(1.002545954791494981e-4).epsilon(1e-12));
  CHECK(rdp_subsampled_gaussian(kAdultQ1, 2.5, 2) ==
        doctest::Approx(6.703336540868726344e-7).epsilon(1e-12));
  CHECK(rdp_subsampled_gaussian(0.37, 0.8, 2) ==
        doctest::Approx(0.41621602442135731645).epsilon(1e-12));
  CHECK(rdp_subsampled_gaussian(kAdultQ1, 2.5, 64) ==
        doctest::Approx(2.1944868565442039964e-5).epsilon(1e-12));
  CHECK(rdp_subsampled_gaussian(0.02, 1.1, 8) ==
        doctest::Approx(2.8770375494631945484e-3).epsilon(1e-12));
  CHECK(rdp_subsampled_gaussian(0.001, 4.0, 256) ==
        doctest::Approx(1.0652757384639062051).epsilon(1e-12));
}

TEST_CASE("huge noise gives vanishing privacy loss") {
  CHECK(rdp_subsampled_gaussian(0.01, 1e6, 8) < 1e-9);
}

TEST_CASE("monotonicity in order, rate, and noise") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const double q = 0.001 + 0.8 * rng.uniform();
    const double psi = 0.5 + 4.0 * rng.uniform();
    const int alpha = 2 + static_cast<int>(rng.below(200));
    const double base = rdp_subsampled_gaussian(q, psi, alpha);
    CHECK(rdp_subsampled_gaussian(q, psi, alpha + 1) >= base - 1e-15);
    CHECK(rdp_subsampled_gaussian(std::min(1.0, q * 1.2), psi, alpha) >=
          base - 1e-15);
    CHECK(rdp_subsampled_gaussian(q, psi * 1.2, alpha) <= base + 1e-15);
  }
}

TEST_CASE("curve values are nondecreasing in the order") {
  RdpCurve c = rdp_curve(kAdultQ3, 7.5);
  for (std::size_t i = 1; i < c.values.size(); ++i)
    CHECK(c.values[i] >= c.values[i - 1] - 1e-15);
}

TEST_CASE("composition algebra") {
  RdpCurve c = rdp_curve(0.01, 1.5);

  SUBCASE("one iteration is the identity") {
    RdpCurve one = compose_iterations(c, 1);
    CHECK(one.values == c.values);
  }
  SUBCASE("two iterations equal self addition") {
    RdpCurve two = compose_iterations(c, 2);
    RdpCurve sum = add_curves(c, c);
    for (std::size_t i = 0; i < c.values.size(); ++i)
      CHECK(two.values[i] == doctest::Approx(sum.values[i]).epsilon(1e-15));
  }
  SUBCASE("T split into a + b composes additively") {
    RdpCurve lhs = compose_iterations(c, 7);
    RdpCurve rhs = add_curves(compose_iterations(c, 3), compose_iterations(c, 4));
    for (std::size_t i = 0; i < c.values.size(); ++i)
      CHECK(lhs.values[i] == doctest::Approx(rhs.values[i]).epsilon(1e-12));
  }
  SUBCASE("adding a zero curve is the identity") {
    RdpCurve zero = c;
    for (double& v : zero.values) v = 0.0;
    RdpCurve sum = add_curves(c, zero);
    CHECK(sum.values == c.values);
  }
  SUBCASE("pointwise addition") {
    RdpCurve a, b;
    a.orders = {2};
    a.values = {0.1};
    b.orders = {2};
    b.values = {0.2};
    RdpCurve s = add_curves(a, b);
    CHECK(s.values[0] == doctest::Approx(0.3));
  }
  SUBCASE("mismatched grids fill missing orders with infinity") {
    RdpCurve a, b;
    a.orders = {2, 3};
    a.values = {0.1, 0.2};
    b.orders = {3, 4};
    b.values = {0.05, 0.3};
    RdpCurve s = add_curves(a, b);
    REQUIRE(s.orders == std::vector<int>{2, 3, 4});
    CHECK(std::isinf(s.values[0]));
    CHECK(s.values[1] == doctest::Approx(0.25));
    CHECK(std::isinf(s.values[2]));
  }
}

TEST_CASE("to_dp on a zero curve is forced by the conversion term") {
  RdpCurve zero;
  zero.orders.assign(default_orders().begin(), default_orders().end());
  zero.values.assign(zero.orders.size(), 0.0);
  const double delta = 1e-5;
  PrivacySpend s = to_dp(zero, delta);
  const int amax = zero.orders.back();
  CHECK(s.optimal_order == amax);
  CHECK(s.epsilon == doctest::Approx(std::log(1.0 / delta) / (amax - 1)));
}

TEST_CASE("to_dp rejects an all infinite curve") {
  RdpCurve c;
  c.orders = {2, 3};
  c.values = {std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(to_dp(c, 1e-5), BudgetUnbounded);
}

TEST_CASE("epsilon is nonincreasing in delta") {
  RdpCurve c = compose_iterations(rdp_curve(0.01, 2.0), 1000);
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {1e-7, 1e-6, 1e-5, 1e-4, 1e-3}) {
    const double eps = to_dp(c, delta).epsilon;
    CHECK(eps <= prev + 1e-15);
    prev = eps;
  }
}

TEST_CASE("published parameter setting reproduces the privacy anchors") {
  const auto t0 = std::chrono::steady_clock::now();

  RdpCurve auto_curve = compose_iterations(rdp_curve(kAdultQ1, 2.5), 10000);
  RdpCurve gan_curve = compose_iterations(rdp_curve(kAdultQ3, 7.5), 15000);

  PrivacySpend p1 = to_dp(auto_curve, 0.5e-5);
  PrivacySpend p2 = to_dp(gan_curve, 0.5e-5);
  CHECK(p1.optimal_order >= 57);
  CHECK(p1.optimal_order <= 63);
  CHECK(p2.optimal_order >= 74);
  CHECK(p2.optimal_order <= 80);

  PrivacySpend combined = to_dp(add_curves(auto_curve, gan_curve), 1e-5);
  CHECK(combined.epsilon > 0.45);
  CHECK(combined.epsilon < 0.53);

  Lemma1Result lemma = lemma1_comparison(auto_curve, gan_curve, 1e-5);
  CHECK(lemma.combined.epsilon < lemma.phase1.epsilon + lemma.phase2.epsilon);
  CHECK(lemma.savings_ratio() > 0.25);
  CHECK(lemma.savings_ratio() < 0.35);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  CHECK(elapsed < 5.0);
}

TEST_CASE("rdp level composition always beats per phase conversion") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const double q1 = 0.0005 + 0.05 * rng.uniform();
    const double q2 = 0.0005 + 0.05 * rng.uniform();
    const double psi1 = 0.8 + 6.0 * rng.uniform();
    const double psi2 = 0.8 + 6.0 * rng.uniform();
    const std::int64_t t1 = 100 + static_cast<std::int64_t>(rng.below(20000));
    const std::int64_t t2 = 100 + static_cast<std::int64_t>(rng.below(20000));
    RdpCurve c1 = compose_iterations(rdp_curve(q1, psi1), t1);
    RdpCurve c2 = compose_iterations(rdp_curve(q2, psi2), t2);
    Lemma1Result r = lemma1_comparison(c1, c2, 1e-5);
    CHECK(r.combined.epsilon < r.phase1.epsilon + r.phase2.epsilon);
  }
}
