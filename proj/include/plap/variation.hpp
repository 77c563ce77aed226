#pragma once

#include <cstdint>

#include "plap/profile.hpp"
#include "plap/prufer.hpp"

namespace plap {

/// Affine one-parameter family q(x, t) = base_q + t dir_q, rho(x, t) = base_rho + t dir_rho.
///
/// dir_q and dir_rho carry the potential role (they may change sign). The
/// density must stay positive for every t in [t_lo, t_hi]; since the family is
/// affine in t it is enough to check both ends.
class CoefficientFamily {
 public:
  CoefficientFamily(Profile base_q, Profile dir_q, Profile base_rho, Profile dir_rho, double t_lo,
                    double t_hi);

  /// Family moving only the potential.
  static CoefficientFamily potential(Profile base_q, Profile dir_q, Profile rho, double t_lo,
                                     double t_hi);
  /// Family moving only the density, with q = 0.
  static CoefficientFamily density(Profile base_rho, Profile dir_rho, double t_lo, double t_hi);

  const PExponent& exponent() const noexcept { return base_q_.exponent(); }
  const Profile& base_q() const noexcept { return base_q_; }
  const Profile& dir_q() const noexcept { return dir_q_; }
  const Profile& base_rho() const noexcept { return base_rho_; }
  const Profile& dir_rho() const noexcept { return dir_rho_; }
  double t_lo() const noexcept { return t_lo_; }
  double t_hi() const noexcept { return t_hi_; }

  Profile q_at(double t) const;
  Profile rho_at(double t) const;
  PruferSolver solver_at(double t, SolverOptions options = {}) const;

 private:
  void check_t(double t) const;

  Profile base_q_;
  Profile dir_q_;
  Profile base_rho_;
  Profile dir_rho_;
  double t_lo_;
  double t_hi_;
};

/// d lambda_n / dt = int dq/dt |y_n|^p - lambda_n int drho/dt |y_n|^p, y_n normalized at t.
double eigenvalue_derivative(const PExponent& p, const CoefficientFamily& fam, double t, int n,
                             SolverOptions options = {});

/// d(lambda_n - lambda_m)/dt = int dq/dt (|y_n|^p - |y_m|^p), for a constant density
/// that does not move. ContractError otherwise.
double gap_derivative(const PExponent& p, const CoefficientFamily& fam, double t, int n, int m,
                      SolverOptions options = {});

/// d(lambda_n / lambda_m)/dt = (lambda_n / lambda_m) int drho/dt (|y_m|^p - |y_n|^p), for
/// q = 0 that does not move. ContractError otherwise.
double ratio_derivative(const PExponent& p, const CoefficientFamily& fam, double t, int n, int m,
                        SolverOptions options = {});

/// Central difference (lambda_n(t + h) - lambda_n(t - h)) / 2h of the shooting eigenvalue.
double eigenvalue_difference_quotient(const CoefficientFamily& fam, double t, int n,
                                      double h = 1e-5, SolverOptions options = {});

struct DerivativeCheck {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;  // |analytic - fd| / max(|fd|, 1e-300)
};

DerivativeCheck check_eigenvalue_derivative(const CoefficientFamily& fam, double t, int n,
                                            double h = 1e-5, SolverOptions options = {});

/// Random affine family with q' >= 0 and rho' <= 0, so that both terms of the
/// derivative push the same way. Deterministic in seed; range t in [-0.5, 0.5].
CoefficientFamily random_affine_family(const PExponent& p, std::uint64_t seed, int cells = 6);

/// Integrals along rho(x, t) = t rho + (1 - t) eps for the first two eigenfunctions.
struct HomotopyIntegrals {
  double t = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double plain_diff = 0.0;     // int (|y1|^p - |y2|^p)
  double weighted_diff = 0.0;  // int (rho - eps)(|y1|^p - |y2|^p)
  double ratio_derivative = 0.0;  // (mu2 / mu1) * weighted_diff

  /// plain_diff - (t / eps) * (-weighted_diff): zero by normalization.
  double normalization_defect(double eps) const { return plain_diff + t / eps * weighted_diff; }
};

HomotopyIntegrals homotopy_integrals(const Profile& rho, double eps, double t,
                                     SolverOptions options = {});

}  // namespace plap
