#include "plap/variation.hpp"

#include <algorithm>
#include <cmath>

#include "plap/error.hpp"
#include "plap/random.hpp"

namespace plap {

namespace {

Profile zero_like(const Profile& f) { return Profile::constant(f.exponent(), Role::potential, 0.0); }

struct PairData {
  double lambda;
  double dq;    // int dir_q |y|^p
  double drho;  // int dir_rho |y|^p
};

PairData pair_data(const CoefficientFamily& fam, double t, int n, const SolverOptions& options) {
  const PruferSolver solver = fam.solver_at(t, options);
  const double lambda = solver.eigenvalue(n);
  const EigenPair pair = solver.eigenfunction(lambda, n);
  const auto mom = solver.moments(pair, {fam.dir_q(), fam.dir_rho()});
  return {lambda, mom[0], mom[1]};
}

}  // namespace

CoefficientFamily::CoefficientFamily(Profile base_q, Profile dir_q, Profile base_rho,
                                     Profile dir_rho, double t_lo, double t_hi)
    : base_q_(std::move(base_q)),
      dir_q_(std::move(dir_q).with_role(Role::potential)),
      base_rho_(std::move(base_rho)),
      dir_rho_(std::move(dir_rho).with_role(Role::potential)),
      t_lo_(t_lo),
      t_hi_(t_hi) {
  const PExponent& p = base_q_.exponent();
  if (!(dir_q_.exponent() == p) || !(base_rho_.exponent() == p) || !(dir_rho_.exponent() == p))
    throw DomainError("family profiles use different exponents");
  if (base_q_.role() != Role::potential) throw DomainError("base_q must be a potential");
  if (base_rho_.role() != Role::density) throw DomainError("base_rho must be a density");
  if (!(t_lo_ <= t_hi_) || !std::isfinite(t_lo_) || !std::isfinite(t_hi_))
    throw DomainError("family t range must be a finite interval");
  // Positivity of rho at both ends (construction of the density profile checks it).
  (void)rho_at(t_lo_);
  (void)rho_at(t_hi_);
}

CoefficientFamily CoefficientFamily::potential(Profile base_q, Profile dir_q, Profile rho,
                                               double t_lo, double t_hi) {
  Profile zero = zero_like(rho);
  return CoefficientFamily(std::move(base_q), std::move(dir_q), std::move(rho), std::move(zero),
                           t_lo, t_hi);
}

CoefficientFamily CoefficientFamily::density(Profile base_rho, Profile dir_rho, double t_lo,
                                             double t_hi) {
  Profile zero = zero_like(base_rho);
  return CoefficientFamily(zero, zero, std::move(base_rho), std::move(dir_rho), t_lo, t_hi);
}

void CoefficientFamily::check_t(double t) const {
  if (!(t >= t_lo_ && t <= t_hi_)) throw DomainError("t outside the family range");
}

Profile CoefficientFamily::q_at(double t) const {
  check_t(t);
  if (t == 0.0) return base_q_;
  return affine_combination(1.0, base_q_, t, dir_q_, Role::potential);
}

Profile CoefficientFamily::rho_at(double t) const {
  check_t(t);
  if (t == 0.0) return base_rho_;
  return affine_combination(1.0, base_rho_, t, dir_rho_, Role::density);
}

PruferSolver CoefficientFamily::solver_at(double t, SolverOptions options) const {
  return PruferSolver(q_at(t), rho_at(t), options);
}

double eigenvalue_derivative(const PExponent& p, const CoefficientFamily& fam, double t, int n,
                             SolverOptions options) {
  if (!(fam.exponent() == p)) throw DomainError("family exponent differs from p");
  const PairData d = pair_data(fam, t, n, options);
  return d.dq - d.lambda * d.drho;
}

double gap_derivative(const PExponent& p, const CoefficientFamily& fam, double t, int n, int m,
                      SolverOptions options) {
  if (!(fam.exponent() == p)) throw DomainError("family exponent differs from p");
  if (!fam.dir_rho().is_zero()) throw ContractError("gap derivative needs a fixed density");
  if (!fam.base_rho().is_constant()) throw ContractError("gap derivative needs a constant density");
  return pair_data(fam, t, n, options).dq - pair_data(fam, t, m, options).dq;
}

double ratio_derivative(const PExponent& p, const CoefficientFamily& fam, double t, int n, int m,
                        SolverOptions options) {
  if (!(fam.exponent() == p)) throw DomainError("family exponent differs from p");
  if (!fam.base_q().is_zero() || !fam.dir_q().is_zero())
    throw ContractError("ratio derivative needs q = 0 along the family");
  const PairData a = pair_data(fam, t, n, options);
  const PairData b = pair_data(fam, t, m, options);
  return a.lambda / b.lambda * (b.drho - a.drho);
}

double eigenvalue_difference_quotient(const CoefficientFamily& fam, double t, int n, double h,
                                      SolverOptions options) {
  if (!(h > 0.0)) throw DomainError("difference step must be positive");
  const double up = fam.solver_at(t + h, options).eigenvalue(n);
  const double down = fam.solver_at(t - h, options).eigenvalue(n);
  return (up - down) / (2.0 * h);
}

DerivativeCheck check_eigenvalue_derivative(const CoefficientFamily& fam, double t, int n,
                                            double h, SolverOptions options) {
  DerivativeCheck c;
  c.analytic = eigenvalue_derivative(fam.exponent(), fam, t, n, options);
  c.finite_difference = eigenvalue_difference_quotient(fam, t, n, h, options);
  c.relative_error =
      std::abs(c.analytic - c.finite_difference) / std::max(std::abs(c.finite_difference), 1e-300);
  return c;
}

CoefficientFamily random_affine_family(const PExponent& p, std::uint64_t seed, int cells) {
  if (cells < 1) throw DomainError("random family needs at least one cell");
  Rng rng(seed);
  const double ph = p.pi_hat();
  auto grid = [&]() {
    std::vector<double> cuts;
    for (int i = 0; i + 1 < cells; ++i) cuts.push_back(rng.uniform(0.05, 0.95) * ph);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> bp{0.0};
    for (double c : cuts)
      if (c - bp.back() > 1e-3 * ph) bp.push_back(c);
    if (ph - bp.back() <= 1e-3 * ph) bp.pop_back();
    bp.push_back(ph);
    return bp;
  };
  auto levels = [&](std::size_t count, double lo, double hi) {
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(rng.uniform(lo, hi));
    return v;
  };
  auto make = [&](Role role, double lo, double hi) {
    auto bp = grid();
    auto v = levels(bp.size() - 1, lo, hi);
    return Profile(p, role, Interpolation::step, std::move(bp), std::move(v));
  };
  Profile base_q = make(Role::potential, 0.0, 3.0);
  Profile dir_q = make(Role::potential, 0.2, 2.0);
  Profile base_rho = make(Role::density, 1.0, 3.0);
  Profile dir_rho = make(Role::potential, -1.0, -0.2);
  return CoefficientFamily(std::move(base_q), std::move(dir_q), std::move(base_rho),
                           std::move(dir_rho), -0.5, 0.5);
}

HomotopyIntegrals homotopy_integrals(const Profile& rho, double eps, double t,
                                     SolverOptions options) {
  if (!(eps > 0.0)) throw DomainError("homotopy floor eps must be positive");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("homotopy parameter must lie in [0, 1]");
  if (rho.role() != Role::density) throw DomainError("homotopy needs a density");
  const PExponent& p = rho.exponent();
  const Profile floor = Profile::constant(p, Role::density, eps);
  const Profile rho_t = affine_combination(t, rho, 1.0 - t, floor, Role::density);
  const Profile excess = affine_combination(1.0, rho, -1.0, floor, Role::potential);
  const Profile one = Profile::constant(p, Role::potential, 1.0);
  const PruferSolver solver(Profile::constant(p, Role::potential, 0.0), rho_t, options);

  HomotopyIntegrals out;
  out.t = t;
  double plain[2];
  double weighted[2];
  for (int n = 1; n <= 2; ++n) {
    const double mu = solver.eigenvalue(n);
    const EigenPair pair = solver.eigenfunction(mu, n);
    const auto mom = solver.moments(pair, {one, excess});
    plain[n - 1] = mom[0];
    weighted[n - 1] = mom[1];
    (n == 1 ? out.mu1 : out.mu2) = mu;
  }
  out.plain_diff = plain[0] - plain[1];
  out.weighted_diff = weighted[0] - weighted[1];
  out.ratio_derivative = out.mu2 / out.mu1 * out.weighted_diff;
  return out;
}

}  // namespace plap
