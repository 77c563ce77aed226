#pragma once

#include <vector>

namespace plap {

/// Exponent p of the p-Laplacian, restricted to 1 < p <= 64.
///
/// Carries a few per-exponent constants (pi_hat and the split points used by
/// the series expansions) so that repeated special-function calls do not
/// recompute them.
class PExponent {
 public:
  static constexpr double kMax = 64.0;

  explicit PExponent(double p);

  double value() const noexcept { return p_; }
  /// p / (p - 1).
  double conjugate() const noexcept { return conj_; }
  double pi_hat() const noexcept { return pi_hat_; }

  // Split points: sin_p switches from the direct to the complementary series
  // at sin_mid(); sinh_p switches to the logarithmic tail at sinh_mid().
  double sin_mid() const noexcept { return sin_mid_; }
  double sinh_mid() const noexcept { return sinh_mid_; }

  friend bool operator==(const PExponent& a, const PExponent& b) { return a.p_ == b.p_; }

 private:
  double p_;
  double conj_;
  double pi_hat_;
  double sin_mid_;
  double sinh_mid_;
};

/// Generalized sine and its derivative at one point.
struct TrigValue {
  double s;  // sin_p(x)
  double c;  // sin_p'(x)
};

/// Generalized hyperbolic sine and its derivative at one point.
struct HyperbolicValue {
  double sh;
  double dsh;
};

/// Signed power |x|^q sign(x).
double oddpow(double x, double q);

/// First positive zero of sin_p: 2 pi / (p sin(pi / p)).
double pi_hat(const PExponent& p);

/// Integral of (1 - t^p)^(-1/p) over [0, w]; the inverse of sin_p on [0, pi_hat/2].
double asin_p(const PExponent& p, double w);

TrigValue sin_p(const PExponent& p, double x);

/// Angle theta in [0, 2 pi_hat) with (sin_p(theta), sin_p'(theta)) a positive
/// multiple of (y, dy): the generalized Prufer phase of a solution state.
double phase_angle(const PExponent& p, double y, double dy);
double cos_p(const PExponent& p, double x);
double tan_p(const PExponent& p, double x);
double cot_p(const PExponent& p, double x);

/// Inverse of the integral of (1 + t^p)^(-1/p); defined for x >= 0.
HyperbolicValue sinh_p(const PExponent& p, double x);
/// sinh_p / sinh_p', in [0, 1). Stays accurate where sinh_p overflows.
double tanh_p(const PExponent& p, double x);

/// Tabulated |sin_p|^p and |sin_p'|^p for the inner loop of the Prufer solver.
///
/// Both halves of [0, pi_hat/2] are represented by Chebyshev expansions in a
/// variable that removes the power-law behaviour at the end points, so the
/// table reproduces the direct evaluation to a few ulps.
class PowerSineTable {
 public:
  explicit PowerSineTable(const PExponent& p);

  struct Powers {
    double sin_pow;  // |sin_p(phi)|^p
    double cos_pow;  // |sin_p'(phi)|^p
  };

  Powers operator()(double phi) const;

  const PExponent& exponent() const noexcept { return p_; }

 private:
  PExponent p_;
  double left_span_;   // sin_mid^p
  double right_span_;  // ((p-1)(pi_hat/2 - sin_mid))^(p*)
  std::vector<double> left_;
  std::vector<double> right_;
};

}  // namespace plap
