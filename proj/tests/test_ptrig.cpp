#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "plap/error.hpp"
#include "plap/ptrig.hpp"

using namespace plap;

namespace {
const std::vector<double> kExponents = {1.2, 1.5, 2.0, 3.0, 4.0, 10.0};
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("oddpow is the signed power") {
  CHECK(oddpow(-2.0, 3.0) == doctest::Approx(-8.0).epsilon(1e-15));
  CHECK(oddpow(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(oddpow(0.0, 0.7) == 0.0);
  for (double x : {0.3, 1.7, 5.0}) {
    CHECK(oddpow(-x, 1.3) == -oddpow(x, 1.3));
    CHECK(oddpow(x, 1.3) < oddpow(x + 0.01, 1.3));
  }
}

TEST_CASE("PExponent rejects p outside (1, 64]") {
  CHECK_THROWS_AS(PExponent(1.0), DomainError);
  CHECK_THROWS_AS(PExponent(0.5), DomainError);
  CHECK_THROWS_AS(PExponent(65.0), DomainError);
  CHECK_THROWS_AS(PExponent(std::nan("")), DomainError);
  const PExponent p(3.0);
  CHECK(p.conjugate() == doctest::Approx(1.5));
}

TEST_CASE("pi_hat closed form and quadrature") {
  CHECK(pi_hat(PExponent(2.0)) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(pi_hat(PExponent(3.0)) == doctest::Approx(2.4183992).epsilon(1e-7));
  CHECK(pi_hat(PExponent(1.5)) == doctest::Approx(4.8367983).epsilon(1e-7));
  CHECK(pi_hat(PExponent(1.5)) == doctest::Approx(2.0 * pi_hat(PExponent(3.0))).epsilon(1e-14));
  for (double q : kExponents) {
    const PExponent p(q);
    const double quad = 2.0 * oracle::sine_integral(q, 1.0);
    CHECK(std::abs(pi_hat(p) - quad) <= 1e-12);
    CHECK(std::abs(pi_hat(p) - 2.0 * asin_p(p, 1.0)) <= 1e-12);
  }
}

TEST_CASE("asin_p matches double-exponential quadrature") {
  for (double q : {1.2, 1.5, 2.0, 3.0, 4.0, 10.0, 64.0}) {
    const PExponent p(q);
    CHECK(asin_p(p, 0.0) == 0.0);
    for (double w : {0.05, 0.3, 0.6, 0.8, 0.9, 0.97, 0.999, 1.0}) {
      INFO("p=" << q << " w=" << w);
      CHECK(std::abs(asin_p(p, w) - oracle::sine_integral(q, w)) <= 1e-12);
    }
  }
  CHECK(asin_p(PExponent(2.0), 1.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(asin_p(PExponent(2.0), 1.01), DomainError);
  CHECK_THROWS_AS(asin_p(PExponent(2.0), -0.01), DomainError);
}

TEST_CASE("sin_p special points") {
  const TrigValue peak = sin_p(PExponent(2.0), kPi / 2);
  CHECK(peak.s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(peak.c) <= 1e-8);
  for (double q : kExponents) {
    const PExponent p(q);
    const TrigValue z = sin_p(p, p.pi_hat());
    CHECK(std::abs(z.s) <= 1e-15);
    CHECK(z.c == doctest::Approx(-1.0).epsilon(1e-15));
    const TrigValue o = sin_p(p, 0.0);
    CHECK(o.s == 0.0);
    CHECK(o.c == 1.0);
  }
}

TEST_CASE("sin_p(3, 0.7) against the inverted quadrature") {
  const PExponent p(3.0);
  const double w = oracle::bisect_increasing(
      [](double v) { return oracle::sine_integral(3.0, v); }, 0.7, 0.0, 1.0);
  CHECK(std::abs(oracle::sine_integral(3.0, w) - 0.7) <= 1e-12);
  const TrigValue v = sin_p(p, 0.7);
  CHECK(std::abs(v.s - w) <= 1e-12);
  CHECK(std::abs(v.c - std::cbrt(1.0 - w * w * w)) <= 1e-12);
}

TEST_CASE("Pythagorean identity, symmetries and round trip") {
  for (double q : kExponents) {
    const PExponent p(q);
    const double ph = p.pi_hat();
    double worst = 0.0;
    double worst_sym = 0.0;
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
      const double x = -2.0 * ph + 4.0 * ph * i / n;
      const TrigValue v = sin_p(p, x);
      worst = std::max(worst, std::abs(std::pow(std::abs(v.s), q) + std::pow(std::abs(v.c), q) - 1.0));
      worst_sym = std::max(worst_sym, std::abs(sin_p(p, ph - x).s - v.s));
      worst_sym = std::max(worst_sym, std::abs(sin_p(p, -x).s + v.s));
      worst_sym = std::max(worst_sym, std::abs(sin_p(p, x + 2.0 * ph).s - v.s));
    }
    INFO("p=" << q);
    CHECK(worst <= 1e-11);
    CHECK(worst_sym <= 1e-12);
    // Near the crest asin_p has slope 1/sin_p', so the round trip is only
    // meaningful where sin_p' is not tiny.
    double worst_trip = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = 0.5 * ph * i / 400;
      if (sin_p(p, x).c < 1e-4) continue;
      worst_trip = std::max(worst_trip, std::abs(asin_p(p, sin_p(p, x).s) - x));
    }
    CHECK(worst_trip <= 1e-10);
  }
}

TEST_CASE("p = 2 reduces to the classical functions") {
  const PExponent p(2.0);
  double worst = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double x = -7.0 + 14.0 * i / 2000;
    const TrigValue v = sin_p(p, x);
    worst = std::max(worst, std::abs(v.s - std::sin(x)));
    worst = std::max(worst, std::abs(v.c - std::cos(x)));
    if (std::abs(std::cos(x)) > 1e-3) worst = std::max(worst, std::abs(tan_p(p, x) - std::tan(x)) / std::max(1.0, std::abs(std::tan(x))));
    if (std::abs(std::sin(x)) > 1e-3) worst = std::max(worst, std::abs(cot_p(p, x) - 1.0 / std::tan(x)) / std::max(1.0, std::abs(1.0 / std::tan(x))));
  }
  for (int i = 0; i <= 2000; ++i) {
    const double x = 4.0 * i / 2000;
    const HyperbolicValue h = sinh_p(p, x);
    worst = std::max(worst, std::abs(h.sh - std::sinh(x)) / std::max(1.0, std::sinh(x)));
    worst = std::max(worst, std::abs(h.dsh - std::cosh(x)) / std::cosh(x));
  }
  CHECK(worst <= 1e-11);
  CHECK(tan_p(p, kPi / 4) == doctest::Approx(1.0).epsilon(1e-14));
  const HyperbolicValue one = sinh_p(p, 1.0);
  CHECK(one.sh == doctest::Approx(1.1752012).epsilon(1e-7));
  CHECK(one.dsh == doctest::Approx(1.5430806).epsilon(1e-7));
}

TEST_CASE("tan_p / cot_p poles and monotonicity") {
  for (double q : kExponents) {
    const PExponent p(q);
    CHECK(std::abs(cot_p(p, 0.5 * p.pi_hat())) <= 1e-12);
    CHECK_THROWS_AS(cot_p(p, 0.0), PoleError);
    CHECK_THROWS_AS(cot_p(p, p.pi_hat()), PoleError);
    // x cot_p(x) = 1 - x^p / p + ...
    CHECK(std::abs(cot_p(p, 1e-6) * 1e-6 - 1.0) <= std::pow(1e-6, q));
    const int n = 4000;
    double prev = cot_p(p, p.pi_hat() / n);
    bool decreasing = true;
    for (int i = 2; i < n; ++i) {
      const double cur = cot_p(p, p.pi_hat() * i / n);
      decreasing = decreasing && cur < prev;
      prev = cur;
    }
    INFO("p=" << q);
    CHECK(decreasing);
  }
  try {
    cot_p(PExponent(2.0), 0.0);
    FAIL("expected pole");
  } catch (const PoleError& e) {
    CHECK(e.location() == 0.0);
  }
}

TEST_CASE("sinh_p against inverted quadrature and its identity") {
  const PExponent p3(3.0);
  const double w = oracle::bisect_increasing(
      [](double v) { return oracle::hyperbolic_integral(3.0, v); }, 0.9, 0.0, 5.0);
  const HyperbolicValue h = sinh_p(p3, 0.9);
  CHECK(std::abs(h.sh - w) <= 1e-12);
  CHECK(std::abs(h.dsh * h.dsh * h.dsh - h.sh * h.sh * h.sh - 1.0) <= 1e-11);
  for (double q : kExponents) {
    const PExponent p(q);
    const HyperbolicValue z = sinh_p(p, 0.0);
    CHECK(z.sh == 0.0);
    CHECK(z.dsh == 1.0);
    for (double x : {0.2, 0.7, 1.0, 1.5, 2.5, 4.0}) {
      INFO("p=" << q << " x=" << x);
      const HyperbolicValue v = sinh_p(p, x);
      // Inverse check through the defining integral.
      CHECK(std::abs(oracle::hyperbolic_integral(q, v.sh) - x) <= 1e-11 * std::max(1.0, x));
      CHECK(tanh_p(p, x) == doctest::Approx(v.sh / v.dsh).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(sinh_p(p3, -0.1), DomainError);
}

TEST_CASE("PowerSineTable reproduces the direct evaluation") {
  for (double q : {1.2, 1.5, 2.0, 3.0, 4.0, 10.0, 64.0}) {
    const PExponent p(q);
    const PowerSineTable table(p);
    double worst = 0.0;
    for (int i = 0; i <= 5000; ++i) {
      const double x = -p.pi_hat() + 3.0 * p.pi_hat() * i / 5000;
      const TrigValue v = sin_p(p, x);
      const auto pw = table(x);
      worst = std::max(worst, std::abs(pw.sin_pow - std::pow(std::abs(v.s), q)));
      worst = std::max(worst, std::abs(pw.cos_pow - std::pow(std::abs(v.c), q)));
    }
    INFO("p=" << q);
    CHECK(worst <= 5e-15 * std::max(4.0, q));
  }
}

TEST_CASE("phase_angle inverts (sin_p, sin_p') on the full period") {
  for (double pv : kExponents) {
    const PExponent p(pv);
    const double ph = p.pi_hat();
    for (int i = 0; i < 400; ++i) {
      const double x = 2.0 * ph * (i + 0.37) / 400;
      const TrigValue t = sin_p(p, x);
      CHECK(std::abs(phase_angle(p, t.s, t.c) - x) <= 1e-12 * std::max(1.0, ph));
      // Positive rescaling does not change the angle.
      CHECK(std::abs(phase_angle(p, 7.5 * t.s, 7.5 * t.c) - x) <= 1e-12 * std::max(1.0, ph));
    }
    CHECK(phase_angle(p, 0.0, 1.0) == 0.0);
    CHECK(std::abs(phase_angle(p, 1.0, 0.0) - 0.5 * ph) <= 1e-15 * ph);
    CHECK_THROWS_AS(phase_angle(p, 0.0, 0.0), DomainError);
  }
}
