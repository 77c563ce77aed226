#pragma once

#include <array>
#include <string>

#include "plap/prufer.hpp"
#include "plap/ptrig.hpp"

namespace plap {

/// Which two-step extremal problem a secular equation belongs to.
///
/// gap:   q = m on (0, pi_hat/2), 0 on (pi_hat/2, pi_hat), rho = 1; roots are eigenvalues t.
/// ratio: q = 0, rho = 1 on (0, pi_hat/2), L = m^p on (pi_hat/2, pi_hat); roots are
///        s = mu^(1/p) pi_hat / 2 with mu the eigenvalue.
enum class SecularCase { gap, ratio };

std::string to_string(SecularCase c);
SecularCase parse_secular_case(const std::string& text);

struct SecularRoots {
  SecularCase kind = SecularCase::gap;
  double p = 2.0;
  double m = 0.0;
  std::array<double, 2> roots{};      // (t1, t2) or (s1, s2)
  std::array<double, 2> residuals{};  // |match_residual| at the roots
  std::array<std::array<double, 2>, 2> brackets{};  // pole-free cells searched
  std::array<double, 2> eigenvalues{};  // t_i, or mu_i = (2 s_i / pi_hat)^p

  double gap() const { return eigenvalues[1] - eigenvalues[0]; }
  double ratio() const { return eigenvalues[1] / eigenvalues[0]; }
};

/// f(t) = t^(1/p) cot_p(t^(1/p) pi_hat / 2), continued to t <= 0 through the
/// hyperbolic branch |t|^(1/p) / tanh_p(|t|^(1/p) pi_hat / 2); f(0) = 2 / pi_hat.
/// Poles at t = (2k)^p raise PoleError with index k.
double f_char(const PExponent& p, double t);

/// Flux form oddpow(f(t), p - 1). Same zeros and poles as f, but with finite
/// slope at the zeros of f, where f itself is steep (p > 2) or flat (p < 2).
double flux_char(const PExponent& p, double t);

/// Two smallest roots of f(t) + f(t - m) = 0, m > 0, solved in flux form.
SecularRoots gap_roots(const PExponent& p, double m);

/// Two smallest positive roots of cot_p(s) + m cot_p(m s) = 0, m > 1, solved in
/// flux form oddpow(cot_p(s), p-1) + m^(p-1) oddpow(cot_p(m s), p-1) = 0.
SecularRoots ratio_roots(const PExponent& p, double m);

/// Signed matching residual at pi_hat / 2 for a candidate eigenvalue: sin(pi d / pi_hat),
/// d the difference of the Prufer phases of the left and right pieces there.
/// Zero exactly when y'/y agrees from both sides, i.e. when the secular equation
/// holds; bounded by 1 and well conditioned next to poles and crests.
double match_residual(const PExponent& p, SecularCase kind, double m, double lambda);

/// Step coefficients of a secular problem as solver profiles (q, rho).
std::pair<Profile, Profile> step_coefficients(const PExponent& p, SecularCase kind, double m);

/// Closed-form normalized eigenfunction of the two-step problem at an eigenvalue.
/// Throws InconsistencyError if lambda does not satisfy the matching condition.
EigenPair step_eigenfunction(const PExponent& p, SecularCase kind, double m, double lambda,
                             int samples = 1024);

}  // namespace plap
