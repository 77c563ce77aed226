#include "plap/ptrig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "plap/error.hpp"

namespace plap {
namespace {

constexpr double kPi = std::numbers::pi;

// Integral of (1 - t^q)^(-1/q) over [0, w] by its binomial series. Callers keep
// w^q <= 1/2, so the series converges at least geometrically with ratio 1/2.
double sine_series(double q, double w) {
  const double u = std::pow(w, q);
  double coef = 1.0;
  double uk = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    coef *= (k - 1 + 1.0 / q) / k;
    uk *= u;
    const double term = coef * uk / (q * k + 1.0);
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return w * sum;
}

// Solves sine_series(q, w) = x on [0, wmax]. The map is convex and increasing,
// so Newton started to the right of the root decreases monotonically onto it.
double invert_sine_series(double q, double x, double wmax) {
  if (x <= 0.0) return 0.0;
  double w = std::min(x, wmax);
  for (int it = 0; it < 100; ++it) {
    const double f = sine_series(q, w) - x;
    const double slope = std::pow(1.0 - std::pow(w, q), 1.0 / q);
    const double step = f * slope;
    const double next = std::clamp(w - step, 0.0, wmax);
    if (std::abs(next - w) <= 2e-16 * w) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

// Integral of 1/(1 - s^q) over [0, T]; valid for T^q <= 1/2.
double tanh_series(double q, double t) {
  const double u = std::pow(t, q);
  double uk = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    uk *= u;
    const double term = uk / (q * k + 1.0);
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return t * sum;
}

// 1/(1 - s^q) - 1/(q (1 - s)) as a function of e = 1 - s. Smooth up to e = 0.
double tanh_regular_part(double q, double e) {
  if (e > 0.1) {
    const double s = 1.0 - e;
    return 1.0 / (1.0 - std::pow(s, q)) - 1.0 / (q * e);
  }
  // 1 - (1-e)^q = sum_{k>=1} b_k e^k with b_1 = q, b_k = -b_{k-1} (q-k+1)/k.
  double b = q;
  double lead = q;   // sum b_k e^(k-1)
  double tail = 0.0; // sum_{k>=2} b_k e^(k-2)
  double ek = 1.0;
  for (int k = 2; k < 200; ++k) {
    b *= -(q - k + 1) / k;
    const double term = b * ek;
    tail += term;
    lead += term * e;
    ek *= e;
    if (std::abs(term) <= 1e-18 * std::abs(tail) || b == 0.0) break;
  }
  return -tail / (q * lead);
}

double tanh_tail_integral(double q, double t0, double t) {
  return boost::math::quadrature::gauss<double, 30>::integrate(
      [q](double s) { return tanh_regular_part(q, 1.0 - s); }, t0, t);
}

struct TanhState {
  double t;      // tanh_p
  double one_m;  // 1 - tanh_p^p, computed without cancellation
};

TanhState solve_tanh(const PExponent& p, double x) {
  const double q = p.value();
  const double t0 = std::pow(0.5, 1.0 / q);
  if (x <= p.sinh_mid()) {
    if (x <= 0.0) return {0.0, 1.0};
    // Newton from the right of the root; the integral is convex in T.
    double t = std::min(x, t0);
    for (int it = 0; it < 100; ++it) {
      const double f = tanh_series(q, t) - x;
      const double step = f * (1.0 - std::pow(t, q));
      const double next = std::clamp(t - step, 0.0, t0);
      if (std::abs(next - t) <= 2e-16 * t) {
        t = next;
        break;
      }
      t = next;
    }
    return {t, 1.0 - std::pow(t, q)};
  }
  // Beyond sinh_mid: x = H0 + G(T) + (1/q) log((1 - T0)/e), e = 1 - T.
  const double excess = x - p.sinh_mid();
  const double e_mid = 1.0 - t0;
  double e = e_mid * std::exp(-q * excess);
  for (int it = 0; it < 100; ++it) {
    const double g = tanh_tail_integral(q, t0, 1.0 - e);
    const double r = e_mid * std::exp(-q * (excess - g));
    const double f = e - r;
    const double df = 1.0 + q * r * tanh_regular_part(q, e);
    const double next = std::clamp(e - f / df, 0.0, e_mid);
    if (std::abs(next - e) <= 2e-16 * e) {
      e = next;
      break;
    }
    e = next;
  }
  const double one_m = -std::expm1(q * std::log1p(-e));
  return {1.0 - e, one_m};
}

// sin_p and sin_p' on the primary quarter [0, pi_hat/2].
TrigValue primary_branch(const PExponent& p, double x) {
  const double q = p.value();
  const double qc = p.conjugate();
  x = std::clamp(x, 0.0, 0.5 * p.pi_hat());
  if (x <= p.sin_mid()) {
    const double w = invert_sine_series(q, x, std::pow(0.5, 1.0 / q));
    return {w, std::pow(1.0 - std::pow(w, q), 1.0 / q)};
  }
  // Complementary variable z = (sin_p')^(p-1) satisfies
  // (p-1)(pi_hat/2 - x) = integral of (1 - s^p*)^(-1/p*) over [0, z].
  const double v = (q - 1.0) * (0.5 * p.pi_hat() - x);
  const double z = invert_sine_series(qc, v, std::pow(0.5, 1.0 / qc));
  const double c_pow = std::pow(z, qc);
  return {std::pow(1.0 - c_pow, 1.0 / q), std::pow(z, 1.0 / (q - 1.0))};
}

// Chebyshev coefficients of f on [0, span] from n Gauss-Chebyshev nodes.
template <class F>
std::vector<double> chebyshev_fit(F f, double span, int n) {
  std::vector<double> vals(n);
  for (int j = 0; j < n; ++j) {
    const double theta = kPi * (j + 0.5) / n;
    vals[j] = f(0.5 * span * (1.0 + std::cos(theta)));
  }
  std::vector<double> coef(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += vals[j] * std::cos(kPi * k * (j + 0.5) / n);
    coef[k] = 2.0 * acc / n;
  }
  coef[0] *= 0.5;
  // Drop the tail that is below rounding.
  while (coef.size() > 2 && std::abs(coef.back()) < 1e-17) coef.pop_back();
  return coef;
}

double chebyshev_eval(const std::vector<double>& coef, double span, double u) {
  const double t = 2.0 * u / span - 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coef.size(); k-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + coef[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coef[0];
}

}  // namespace

PExponent::PExponent(double p) : p_(p) {
  if (!(p > 1.0) || !(p <= kMax)) {
    throw DomainError("exponent p must satisfy 1 < p <= 64, got " + std::to_string(p));
  }
  conj_ = p / (p - 1.0);
  pi_hat_ = 2.0 * kPi / (p * std::sin(kPi / p));
  sin_mid_ = sine_series(p, std::pow(0.5, 1.0 / p));
  sinh_mid_ = tanh_series(p, std::pow(0.5, 1.0 / p));
}

double oddpow(double x, double q) {
  if (x > 0.0) return std::pow(x, q);
  if (x < 0.0) return -std::pow(-x, q);
  return 0.0;
}

double pi_hat(const PExponent& p) { return p.pi_hat(); }

double asin_p(const PExponent& p, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("asin_p: argument must lie in [0, 1], got " + std::to_string(w));
  }
  const double q = p.value();
  const double u = std::pow(w, q);
  if (u <= 0.5) return sine_series(q, w);
  const double z = std::pow(1.0 - u, 1.0 / p.conjugate());
  return 0.5 * p.pi_hat() - sine_series(p.conjugate(), z) / (q - 1.0);
}

double phase_angle(const PExponent& p, double y, double dy) {
  const double m = std::max(std::abs(y), std::abs(dy));
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("phase_angle: need a finite nonzero pair");
  const double q = p.value();
  const double a = std::abs(y) / m;
  const double b = std::abs(dy) / m;
  const double n = std::pow(std::pow(a, q) + std::pow(b, q), 1.0 / q);
  const double w = a / n;
  double base;
  if (std::pow(w, q) <= 0.5) {
    base = sine_series(q, w);
  } else {
    // (1 - w^p)^(1/p*) taken from the other coordinate, free of cancellation.
    const double z = std::pow(b / n, q - 1.0);
    base = 0.5 * p.pi_hat() - sine_series(p.conjugate(), z) / (q - 1.0);
  }
  const double ph = p.pi_hat();
  if (y >= 0.0) return dy >= 0.0 ? base : ph - base;
  return dy < 0.0 ? ph + base : 2.0 * ph - base;
}

TrigValue sin_p(const PExponent& p, double x) {
  const double ph = p.pi_hat();
  double r = std::fmod(x, 2.0 * ph);
  if (r < 0.0) r += 2.0 * ph;
  double sign = 1.0;
  if (r >= ph) {
    r -= ph;
    sign = -1.0;
  }
  if (r > 0.5 * ph) {
    const TrigValue v = primary_branch(p, ph - r);
    return {sign * v.s, -sign * v.c};
  }
  const TrigValue v = primary_branch(p, r);
  return {sign * v.s, sign * v.c};
}

double cos_p(const PExponent& p, double x) { return sin_p(p, x).c; }

double tan_p(const PExponent& p, double x) {
  const TrigValue v = sin_p(p, x);
  if (std::abs(v.c) < 1e-300) throw PoleError("tan_p: pole at x = " + std::to_string(x), x);
  return v.s / v.c;
}

double cot_p(const PExponent& p, double x) {
  const TrigValue v = sin_p(p, x);
  if (std::abs(v.s) < 1e-300) throw PoleError("cot_p: pole at x = " + std::to_string(x), x);
  return v.c / v.s;
}

HyperbolicValue sinh_p(const PExponent& p, double x) {
  if (!(x >= 0.0)) {
    throw DomainError("sinh_p: argument must be nonnegative, got " + std::to_string(x));
  }
  const TanhState st = solve_tanh(p, x);
  const double dsh = std::pow(st.one_m, -1.0 / p.value());
  return {st.t * dsh, dsh};
}

double tanh_p(const PExponent& p, double x) {
  if (!(x >= 0.0)) {
    throw DomainError("tanh_p: argument must be nonnegative, got " + std::to_string(x));
  }
  return solve_tanh(p, x).t;
}

PowerSineTable::PowerSineTable(const PExponent& p) : p_(p) {
  const double q = p.value();
  const double qc = p.conjugate();
  const double w_mid = std::pow(0.5, 1.0 / q);
  const double z_mid = std::pow(0.5, 1.0 / qc);
  left_span_ = std::pow(p.sin_mid(), q);
  right_span_ = std::pow((q - 1.0) * (0.5 * p.pi_hat() - p.sin_mid()), qc);

  // Left piece: |sin_p x|^p / x^p as a function of u = x^p.
  left_ = chebyshev_fit(
      [&](double u) {
        const double x = std::pow(u, 1.0 / q);
        const double w = invert_sine_series(q, x, w_mid);
        return std::pow(w / x, q);
      },
      left_span_, 96);
  // Right piece: |sin_p' x|^p / v^p* with v = (p-1)(pi_hat/2 - x), as a
  // function of u = v^p*.
  right_ = chebyshev_fit(
      [&](double u) {
        const double v = std::pow(u, 1.0 / qc);
        const double z = invert_sine_series(qc, v, z_mid);
        return std::pow(z / v, qc);
      },
      right_span_, 96);
}

PowerSineTable::Powers PowerSineTable::operator()(double phi) const {
  const double q = p_.value();
  const double ph = p_.pi_hat();
  double r = std::fmod(phi, ph);
  if (r < 0.0) r += ph;
  r = std::min(r, ph - r);
  if (r <= p_.sin_mid()) {
    const double u = std::pow(r, q);
    const double s = u * chebyshev_eval(left_, left_span_, u);
    return {s, 1.0 - s};
  }
  const double v = std::max(0.0, (q - 1.0) * (0.5 * ph - r));
  const double u = std::pow(v, p_.conjugate());
  const double c = u * chebyshev_eval(right_, right_span_, u);
  return {1.0 - c, c};
}

}  // namespace plap
