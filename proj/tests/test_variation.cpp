#include <cmath>
#include <vector>

#include "doctest.h"
#include "plap/error.hpp"
#include "plap/variation.hpp"

using namespace plap;

namespace {

Profile indicator(const PExponent& p, double a) {
  const double ph = p.pi_hat();
  return Profile(p, Role::potential, Interpolation::step, {0.0, a, ph}, {1.0, 0.0});
}

Profile konst(const PExponent& p, Role role, double v) { return Profile::constant(p, role, v); }

}  // namespace

TEST_CASE("shift and scaling directions") {
  const PExponent p(2.5);
  const double ph = p.pi_hat();
  const Profile q(p, Role::potential, Interpolation::linear, {0.0, 0.6 * ph, ph}, {2.0, 0.0, 1.0});
  const Profile rho(p, Role::density, Interpolation::step, {0.0, 0.3 * ph, ph}, {1.5, 1.0});
  for (int n = 1; n <= 2; ++n) {
    // With rho = 1 the normalization makes the shift derivative exactly c.
    const auto shift = CoefficientFamily::potential(q, konst(p, Role::potential, 0.7),
                                                    konst(p, Role::density, 1.0), -1, 1);
    CHECK(eigenvalue_derivative(p, shift, 0.0, n) == doctest::Approx(0.7).epsilon(1e-9));

    const CoefficientFamily scale(q, konst(p, Role::potential, 0.0), rho,
                                  konst(p, Role::potential, 0.4), -0.5, 0.5);
    const PruferSolver s(q, rho);
    const double lam = s.eigenvalue(n);
    const EigenPair e = s.eigenfunction(lam, n);
    const double plain = s.moment(e, konst(p, Role::potential, 1.0));
    CHECK(eigenvalue_derivative(p, scale, 0.0, n) ==
          doctest::Approx(-lam * 0.4 * plain).epsilon(1e-9));
  }
}

TEST_CASE("derivative matches central differences on random families") {
  for (double pv : {1.6, 2.0, 3.0}) {
    const PExponent p(pv);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const CoefficientFamily fam = random_affine_family(p, seed);
      for (int n = 1; n <= 2; ++n) {
        const DerivativeCheck c = check_eigenvalue_derivative(fam, 0.1, n);
        CHECK(c.relative_error <= 1e-4);
        CHECK(c.analytic > 0.0);
      }
    }
  }
}

TEST_CASE("random families are deterministic and keep rho positive") {
  const PExponent p(2.0);
  const auto a = random_affine_family(p, 42);
  const auto b = random_affine_family(p, 42);
  CHECK(a.base_q().hash() == b.base_q().hash());
  CHECK(a.dir_rho().hash() == b.dir_rho().hash());
  CHECK(a.base_q().hash() != random_affine_family(p, 43).base_q().hash());
  CHECK(a.dir_q().min_value() >= 0.0);
  CHECK(a.dir_rho().max_value() <= 0.0);
  CHECK(a.rho_at(a.t_hi()).min_value() > 0.0);
  CHECK_THROWS_AS(a.q_at(2.0), DomainError);
}

TEST_CASE("gap derivative") {
  const PExponent p(3.0);
  const double ph = p.pi_hat();
  const Profile q0 = konst(p, Role::potential, 0.0);
  const Profile rho = konst(p, Role::density, 1.0);
  SUBCASE("constant direction leaves the gap unchanged") {
    const auto fam = CoefficientFamily::potential(q0, konst(p, Role::potential, 2.0), rho, 0, 1);
    CHECK(std::abs(gap_derivative(p, fam, 0.0, 2, 1)) <= 1e-9);
  }
  SUBCASE("half indicator at a constant potential gives zero") {
    const auto fam = CoefficientFamily::potential(q0, indicator(p, 0.5 * ph), rho, 0, 1);
    CHECK(std::abs(gap_derivative(p, fam, 0.0, 2, 1)) <= 1e-9);
  }
  SUBCASE("indicator slightly past the middle gives a negative derivative") {
    for (double d : {0.02, 0.1, 0.3}) {
      const auto fam = CoefficientFamily::potential(q0, indicator(p, 0.5 * ph + d), rho, 0, 1);
      CHECK(gap_derivative(p, fam, 0.0, 2, 1) < 0.0);
    }
  }
  SUBCASE("additivity") {
    const Profile q(p, Role::potential, Interpolation::step, {0.0, 0.4 * ph, ph}, {1.0, 2.5});
    const auto fam = CoefficientFamily::potential(q, indicator(p, 0.7 * ph), rho, 0, 1);
    const double g = gap_derivative(p, fam, 0.3, 2, 1);
    const double d2 = eigenvalue_derivative(p, fam, 0.3, 2);
    const double d1 = eigenvalue_derivative(p, fam, 0.3, 1);
    CHECK(std::abs(g - (d2 - d1)) <= 1e-10);
  }
  SUBCASE("contract") {
    const CoefficientFamily moving(q0, indicator(p, 1.0), rho, konst(p, Role::potential, 0.1), 0, 1);
    CHECK_THROWS_AS(gap_derivative(p, moving, 0.0, 2, 1), ContractError);
    const Profile rho2(p, Role::density, Interpolation::step, {0.0, 1.0, ph}, {1.0, 2.0});
    const auto bumpy = CoefficientFamily::potential(q0, indicator(p, 1.0), rho2, 0, 1);
    CHECK_THROWS_AS(gap_derivative(p, bumpy, 0.0, 2, 1), ContractError);
  }
}

TEST_CASE("ratio derivative") {
  const PExponent p(2.0);
  const double ph = p.pi_hat();
  const Profile rho(p, Role::density, Interpolation::step, {0.0, 0.3 * ph, ph}, {2.0, 1.0});
  SUBCASE("scaling direction leaves the ratio unchanged") {
    const auto flat = CoefficientFamily::density(konst(p, Role::density, 1.3),
                                                 konst(p, Role::potential, 0.5), 0, 1);
    CHECK(std::abs(ratio_derivative(p, flat, 0.0, 2, 1)) <= 1e-9);
    const auto scaled = CoefficientFamily::density(rho, rho.with_role(Role::potential), 0, 1);
    CHECK(std::abs(ratio_derivative(p, scaled, 0.0, 2, 1)) <= 1e-9);
  }
  SUBCASE("quotient rule and finite differences") {
    const Profile dir(p, Role::potential, Interpolation::step, {0.0, 0.6 * ph, ph}, {0.0, 1.0});
    const auto fam = CoefficientFamily::density(rho, dir, 0, 1);
    const double t = 0.4;
    const double r = ratio_derivative(p, fam, t, 2, 1);
    const PruferSolver s = fam.solver_at(t);
    const double l1 = s.eigenvalue(1);
    const double l2 = s.eigenvalue(2);
    const double d1 = eigenvalue_derivative(p, fam, t, 1);
    const double d2 = eigenvalue_derivative(p, fam, t, 2);
    CHECK(std::abs(r - (d2 * l1 - l2 * d1) / (l1 * l1)) <= 1e-9);
    const double h = 1e-5;
    auto ratio_at = [&](double tt) {
      const PruferSolver u = fam.solver_at(tt);
      return u.eigenvalue(2) / u.eigenvalue(1);
    };
    const double fd = (ratio_at(t + h) - ratio_at(t - h)) / (2 * h);
    CHECK(std::abs(r - fd) <= 1e-4 * std::abs(fd));
  }
  SUBCASE("contract") {
    const auto fam = CoefficientFamily::potential(konst(p, Role::potential, 1.0),
                                                  konst(p, Role::potential, 0.0), rho, 0, 1);
    CHECK_THROWS_AS(ratio_derivative(p, fam, 0.0, 2, 1), ContractError);
  }
}

TEST_CASE("symmetric single-well homotopy") {
  for (double pv : {1.5, 2.0, 3.0}) {
    const PExponent p(pv);
    const double ph = p.pi_hat();
    const Profile rho(p, Role::density, Interpolation::step, {0.0, 0.25 * ph, 0.75 * ph, ph},
                      {3.0, 1.0, 3.0}, ShapeTag::symmetric_single_well(0.5 * ph));
    const double eps = 1.0;
    for (double t : {0.1, 0.5, 0.9}) {
      const HomotopyIntegrals h = homotopy_integrals(rho, eps, t);
      CHECK(std::abs(h.normalization_defect(eps)) <= 1e-7);
      CHECK(h.weighted_diff <= 1e-9);
      CHECK(h.ratio_derivative <= 1e-9);
    }
  }
}
