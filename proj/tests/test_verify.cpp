#include <cmath>
#include <string>

#include "doctest.h"
#include "plap/error.hpp"
#include "plap/format.hpp"
#include "plap/verify.hpp"
#include "plap/wells.hpp"

using namespace plap;

namespace {

IntersectionPattern pattern_of(const PruferSolver& s) {
  const EigenPair y1 = s.eigenfunction(s.eigenvalue(1), 1);
  const EigenPair y2 = s.eigenfunction(s.eigenvalue(2), 2);
  return intersection_pattern(s, y1, y2);
}

BatteryOptions small(int samples) {
  BatteryOptions o;
  o.samples = samples;
  o.homotopy_samples = 2;
  return o;
}

std::string without_runtime(const BatteryReport& r) {
  auto j = r.to_json();
  j.erase("runtime_ms");
  return dump_json(j);
}

}  // namespace

TEST_CASE("constant problem: crossings at pi_hat/3 and 2 pi_hat/3") {
  // |sin_p 2x| = |sin_p x| on (pi_hat/4, pi_hat/2) reads sin_p(pi_hat - 2x) = sin_p(x) with
  // both arguments on the increasing branch, so x = pi_hat/3; the rest follows by symmetry.
  for (double pv : {1.5, 2.0, 3.0, 4.0}) {
    const PExponent p(pv);
    const PruferSolver s(Profile::constant(p, Role::potential, 0.0),
                         Profile::constant(p, Role::density, 1.0));
    const IntersectionPattern ip = pattern_of(s);
    REQUIRE(ip.crossings.size() == 2);
    CHECK(std::abs(ip.crossings[0] - p.pi_hat() / 3.0) <= 1e-8);
    CHECK(std::abs(ip.crossings[1] - 2.0 * p.pi_hat() / 3.0) <= 1e-8);
    CHECK(ip.contacts.empty());
  }
  const PExponent two(2.0);
  const PruferSolver s(Profile::constant(two, Role::potential, 0.0),
                       Profile::constant(two, Role::density, 1.0));
  const IntersectionPattern ip = pattern_of(s);
  CHECK(std::abs(ip.crossings[0] - M_PI / 3.0) <= 1e-8);
  CHECK(std::abs(ip.crossings[1] - 2.0 * M_PI / 3.0) <= 1e-8);
}

TEST_CASE("symmetric densities give mirror-image crossings") {
  for (double pv : {1.5, 2.5}) {
    const PExponent p(pv);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Profile rho = symmetrize(
          random_single_well(p, 0.5 * p.pi_hat(), 0.3, 3.0, 6, seed, Role::density));
      const PruferSolver s(Profile::constant(p, Role::potential, 0.0), rho);
      const IntersectionPattern ip = pattern_of(s);
      REQUIRE(ip.crossings.size() == 2);
      CHECK(std::abs(ip.crossings[0] + ip.crossings[1] - p.pi_hat()) <= 1e-6);
    }
  }
}

TEST_CASE("at most two crossings for random coefficients") {
  const PExponent p(3.0);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Profile q = random_single_barrier(p, 0.3 * p.pi_hat(), 0.0, 6.0, 5, seed);
    const Profile rho = random_single_well(p, 0.7 * p.pi_hat(), 0.5, 2.0, 4, seed + 100,
                                           Role::density);
    const PruferSolver s(q, rho);
    CHECK(pattern_of(s).crossings.size() <= 2);
  }
  const PruferSolver s(Profile::constant(p, Role::potential, 0.0),
                       Profile::constant(p, Role::density, 1.0));
  const EigenPair y1 = s.eigenfunction(s.eigenvalue(1), 1);
  CHECK_THROWS_AS(intersection_pattern(s, y1, y1), ContractError);
}

TEST_CASE("gap battery") {
  const PExponent p(2.0);
  const BatteryReport r = check_gap_bound(p, small(12));
  CHECK(r.passed());
  CHECK(r.violations.empty());
  CHECK(r.min_margin >= -1e-6);
  CHECK(r.rows.size() == 15);  // 12 wells and 3 constants
  CHECK(r.summary.at("max_equality_error") <= 1e-8);
  CHECK(r.summary.at("max_crossings") <= 2);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i - 1].id < r.rows[i].id);
  for (const auto& row : r.rows) {
    if (row.id.rfind("well", 0) == 0) CHECK(row.margin > 1e-8);
  }
  // Deterministic in (p, samples, seed).
  CHECK(without_runtime(r) == without_runtime(check_gap_bound(p, small(12))));
  BatteryOptions other = small(12);
  other.seed = 7;
  CHECK(without_runtime(r) != without_runtime(check_gap_bound(p, other)));
  CHECK_THROWS_AS(check_gap_bound(p, small(0)), DomainError);
}

TEST_CASE("ratio batteries") {
  const PExponent p(2.5);
  const double bound = std::pow(2.0, 2.5);
  const BatteryReport barrier = check_ratio_bound(p, "barrier", small(8));
  CHECK(barrier.passed());
  for (const auto& row : barrier.rows) CHECK(row.value >= bound - 1e-6);

  const BatteryReport well = check_ratio_bound(p, "symmetric_well", small(8));
  CHECK(well.passed());
  for (const auto& row : well.rows) CHECK(row.value <= bound + 1e-6);
  CHECK(well.summary.at("max_homotopy_derivative") <= 1e-8);
  CHECK(well.summary.at("max_identity_defect") <= 1e-7);
  CHECK(well.summary.at("max_symmetry_defect") <= 1e-6);

  const BatteryReport explore = check_ratio_bound(p, "symmetric_barrier", small(6));
  CHECK_FALSE(explore.gating);
  CHECK(explore.passed());
  CHECK_THROWS_AS(check_ratio_bound(p, "wells", small(2)), DomainError);
}

TEST_CASE("battery output formats") {
  const BatteryReport r = check_gap_bound(PExponent(1.5), small(3));
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("id,seed,hash,lambda1,lambda2,value,margin,crossings\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(r.rows.size()));
  const auto j = nlohmann::json::parse(dump_json(r.to_json()));
  CHECK(j.at("suite") == "gap");
  CHECK(j.at("rows").size() == r.rows.size());
  CHECK(j.at("rows")[0].at("lambda1").get<double>() == r.rows[0].lambda1);
}

TEST_CASE("step cases agree with the secular oracle") {
  for (double pv : {1.5, 2.0, 3.0}) {
    const PExponent p(pv);
    for (double m : {0.5, 3.0}) CHECK(cross_validate(p, SecularCase::gap, m) <= 1e-8);
    for (double m : {1.5, 4.0}) CHECK(cross_validate(p, SecularCase::ratio, m) <= 1e-8);
  }
  // Degenerate steps fall back to the constant spectrum n^p.
  const PExponent p(2.0);
  const SecularRoots g = gap_roots(p, 1e-9);
  CHECK(g.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(g.eigenvalues[1] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(cross_validate(p, SecularCase::gap, 1e-9) <= 1e-8);
  CHECK(cross_validate(p, SecularCase::ratio, 1.0 + 1e-9) <= 1e-8);
}

TEST_CASE("step barrier ratio is (s2/s1)^p") {
  const PExponent p(3.0);
  const SecularRoots r = ratio_roots(p, 1.7);
  const auto [q, rho] = step_coefficients(p, SecularCase::ratio, 1.7);
  const PruferSolver s(q, rho);
  const double shoot = s.eigenvalue(2) / s.eigenvalue(1);
  CHECK(std::abs(shoot - std::pow(r.roots[1] / r.roots[0], 3.0)) <= 1e-8 * shoot);
}

TEST_CASE("counterexamples below the bounds") {
  for (double pv : {1.5, 2.0, 3.0}) {
    const PExponent p(pv);
    const double mid = 0.5 * p.pi_hat();
    const Counterexample g = find_gap_counterexample(p);
    CHECK(g.a > mid);
    CHECK(g.t > 0.0);
    CHECK(g.value < std::pow(2.0, pv) - 1.0 - 1e-3);
    CHECK(g.profile.shape().kind == ShapeTag::Kind::single_well);
    CHECK(is_single_well(g.profile, g.a));
    // Independent recomputation of the reported gap.
    const PruferSolver s(g.profile, Profile::constant(p, Role::density, 1.0));
    CHECK(std::abs(s.eigenvalue(2) - s.eigenvalue(1) - g.value) <= 1e-9);

    const Counterexample d = find_ratio_counterexample(p);
    CHECK(d.a < mid);
    CHECK(d.t >= 1.0);
    CHECK(d.value < std::pow(2.0, pv) - 1e-3);
    CHECK(d.profile.role() == Role::density);
    CHECK(is_single_barrier(d.profile, d.a));
  }
  // Nothing is 1e3 below the bound on this grid.
  CHECK_THROWS_AS(find_gap_counterexample(PExponent(2.0), 1e3), SearchFailure);
}

TEST_CASE("monotonicity scans") {
  const BatteryReport g = monotonicity_scan(PExponent(2.0), SecularCase::gap, 64, 1e-4, 18.0);
  CHECK(g.passed());
  CHECK(g.rows.size() == 64);
  CHECK(g.summary.at("limit_error") <= 1e-4);
  CHECK(g.summary.at("large_m_min_excess") >= 0.0);
  for (std::size_t i = 1; i < g.rows.size(); ++i) CHECK(g.rows[i].value >= g.rows[i - 1].value);

  const BatteryReport r = monotonicity_scan(PExponent(3.0), SecularCase::ratio, 64, 1e-6, 10.0);
  CHECK(r.passed());
  CHECK(r.summary.at("limit_error") <= 1e-4);
  for (const auto& row : r.rows) CHECK(row.value > 2.0);
  CHECK_THROWS_AS(monotonicity_scan(PExponent(2.0), SecularCase::ratio, 8, 1e-3, 1.0),
                  DomainError);
  CHECK_THROWS_AS(monotonicity_scan(PExponent(2.0), SecularCase::gap, 1, 1e-3, 1.0), DomainError);
}
