#include "plap/secular.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "plap/error.hpp"
#include "plap/roots.hpp"

namespace plap {

namespace {

// Solution of (y'^(p-1))' = -(p-1) kappa y^(p-1), y(0) = 0, y'(0) = 1, at distance d.
struct Branch {
  double kappa;
  double k;  // |kappa|^(1/p), or 1 when kappa = 0

  Branch(const PExponent& p, double kap)
      : kappa(kap), k(kap == 0.0 ? 1.0 : std::pow(std::abs(kap), 1.0 / p.value())) {}

  // (y, y') scaled so that y'(0) = 1.
  std::pair<double, double> at(const PExponent& p, double d) const {
    if (kappa > 0.0) {
      const TrigValue t = sin_p(p, k * d);
      return {t.s / k, t.c};
    }
    if (kappa < 0.0) {
      const HyperbolicValue h = sinh_p(p, k * d);
      return {h.sh / k, h.dsh};
    }
    return {d, 1.0};
  }

  // Prufer phase of (y, y') at distance d, computed without overflow.
  double phase(const PExponent& p, double d) const {
    if (kappa > 0.0) {
      const TrigValue t = sin_p(p, k * d);
      return phase_angle(p, t.s, k * t.c);
    }
    if (kappa < 0.0) return phase_angle(p, tanh_p(p, k * d), k);
    return phase_angle(p, d, 1.0);
  }

  // Integral of |y|^p over [0, d] for the same scaling.
  double power_integral(const PExponent& p, double d) const {
    const double q = p.value();
    const double x = k * d;
    if (kappa == 0.0) return std::pow(d, q + 1.0) / (q + 1.0);
    double base;
    if (x < 0.1) {
      // The closed forms below cancel for small arguments.
      boost::math::quadrature::tanh_sinh<double> ts;
      base = kappa > 0.0
                 ? ts.integrate([&](double u) { return std::pow(std::abs(sin_p(p, u).s), q); },
                                0.0, x)
                 : ts.integrate([&](double u) { return std::pow(sinh_p(p, u).sh, q); }, 0.0, x);
    } else if (kappa > 0.0) {
      const TrigValue t = sin_p(p, x);
      base = (x - t.s * oddpow(t.c, q - 1.0)) / q;
    } else {
      const HyperbolicValue h = sinh_p(p, x);
      base = (h.sh * std::pow(h.dsh, q - 1.0) - x) / q;
    }
    // Change of variable u = k x and the 1/k in y.
    return base / std::pow(k, q + 1.0);
  }
};

struct Cell {
  double lo;
  double hi;
};

// Sorted pole list with near-duplicates merged.
std::vector<double> merge_poles(std::vector<double> poles) {
  std::sort(poles.begin(), poles.end());
  std::vector<double> out;
  for (double x : poles) {
    if (out.empty() || x - out.back() > 1e-12 * std::max(1.0, x)) out.push_back(x);
  }
  return out;
}

// F is decreasing on (lo, hi), +inf at lo and -inf at hi. Step inward from the
// poles until the signs are right, then run Brent.
RootResult root_in_cell(const std::function<double(double)>& F, double lo, double hi,
                        bool lo_is_pole) {
  const double width = hi - lo;
  double a = lo;
  double fa;
  if (lo_is_pole) {
    double d = 1e-3 * width;
    for (;;) {
      a = lo + d;
      fa = F(a);
      if (fa > 0.0) break;
      d *= 0.125;
      if (!(a > lo) || d < 1e-300) throw BracketError("no sign change near the left pole");
    }
  } else {
    fa = F(a);
    if (!(fa > 0.0)) throw BracketError("secular function not positive at the left end");
  }
  double d = 1e-3 * width;
  double b;
  double fb;
  for (;;) {
    b = hi - d;
    fb = F(b);
    if (fb < 0.0) break;
    d *= 0.125;
    if (!(b < hi) || d < 1e-300) throw BracketError("no sign change near the right pole");
  }
  if (fa == 0.0) return {a, 0.0, 0};
  const double xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b));
  return brent(F, a, b, fa, fb, xtol);
}

}  // namespace

std::string to_string(SecularCase c) { return c == SecularCase::gap ? "gap" : "ratio"; }

SecularCase parse_secular_case(const std::string& text) {
  if (text == "gap") return SecularCase::gap;
  if (text == "ratio") return SecularCase::ratio;
  throw DomainError("unknown secular case '" + text + "'");
}

double f_char(const PExponent& p, double t) {
  if (!std::isfinite(t)) throw DomainError("f_char argument must be finite");
  const double ph = p.pi_hat();
  if (t == 0.0) return 2.0 / ph;
  const double r = std::pow(std::abs(t), 1.0 / p.value());
  const double x = 0.5 * r * ph;
  // x cot_p(x) = 1 + O(x^p), likewise x / tanh_p(x).
  if (x < 1e-150) return 2.0 / ph;
  if (t < 0.0) return r / tanh_p(p, x);
  const int k = static_cast<int>(std::lround(r / 2.0));
  try {
    return r * cot_p(p, x);
  } catch (const PoleError&) {
    throw PoleError("f_char pole", std::pow(2.0 * k, p.value()), k);
  }
}

double flux_char(const PExponent& p, double t) { return oddpow(f_char(p, t), p.value() - 1.0); }

double match_residual(const PExponent& p, SecularCase kind, double m, double lambda) {
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  double left;
  double right;
  if (kind == SecularCase::gap) {
    if (!(m > 0.0)) throw DomainError("gap parameter m must be positive");
    left = lambda - m;
    right = lambda;
  } else {
    if (!(m > 1.0)) throw DomainError("ratio parameter m must exceed 1");
    left = lambda;
    right = std::pow(m, p.value()) * lambda;
  }
  const double h = 0.5 * p.pi_hat();
  // The right piece runs backwards from pi_hat, so its phase at h is reflected.
  const double a = Branch(p, left).phase(p, h);
  const double b = p.pi_hat() - Branch(p, right).phase(p, h);
  return std::sin(std::numbers::pi * (a - b) / p.pi_hat());
}

SecularRoots gap_roots(const PExponent& p, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("gap parameter m must be positive");
  const double q = p.value();
  auto F = [&](double t) { return flux_char(p, t) + flux_char(p, t - m); };

  std::vector<double> poles;
  for (int k = 1; k <= 3; ++k) {
    poles.push_back(std::pow(2.0 * k, q));
    poles.push_back(m + std::pow(2.0 * k, q));
  }
  poles = merge_poles(std::move(poles));

  SecularRoots out;
  out.kind = SecularCase::gap;
  out.p = q;
  out.m = m;
  // f(1) = 0 and f(1 - m) > 0, so F(1) > 0 and the first root lies in (1, 2^p).
  const Cell cells[2] = {{1.0, poles[0]}, {poles[0], poles[1]}};
  for (int i = 0; i < 2; ++i) {
    const RootResult r = root_in_cell(F, cells[i].lo, cells[i].hi, i > 0);
    out.roots[i] = r.root;
    out.brackets[i] = {cells[i].lo, cells[i].hi};
    out.eigenvalues[i] = r.root;
    out.residuals[i] = std::abs(match_residual(p, SecularCase::gap, m, r.root));
  }
  return out;
}

SecularRoots ratio_roots(const PExponent& p, double m) {
  if (!(m > 1.0) || !std::isfinite(m)) throw DomainError("ratio parameter m must exceed 1");
  const double ph = p.pi_hat();
  const double e = p.value() - 1.0;
  const double me = std::pow(m, e);
  auto G = [&](double s) { return oddpow(cot_p(p, s), e) + me * oddpow(cot_p(p, m * s), e); };

  std::vector<double> poles;
  for (int k = 1; k <= 2; ++k) {
    poles.push_back(k * ph);
    poles.push_back(k * ph / m);
  }
  poles = merge_poles(std::move(poles));

  SecularRoots out;
  out.kind = SecularCase::ratio;
  out.p = p.value();
  out.m = m;
  // Both terms behave like 1/s at 0+, so the first cell is (0, pi_hat / m).
  const Cell cells[2] = {{0.0, poles[0]}, {poles[0], poles[1]}};
  for (int i = 0; i < 2; ++i) {
    const RootResult r = root_in_cell(G, cells[i].lo, cells[i].hi, true);
    out.roots[i] = r.root;
    out.brackets[i] = {cells[i].lo, cells[i].hi};
    out.eigenvalues[i] = std::pow(2.0 * r.root / ph, p.value());
    out.residuals[i] = std::abs(match_residual(p, SecularCase::ratio, m, out.eigenvalues[i]));
  }
  return out;
}

std::pair<Profile, Profile> step_coefficients(const PExponent& p, SecularCase kind, double m) {
  const double ph = p.pi_hat();
  const std::vector<double> bp{0.0, 0.5 * ph, ph};
  if (kind == SecularCase::gap) {
    if (!(m > 0.0)) throw DomainError("gap parameter m must be positive");
    return {Profile(p, Role::potential, Interpolation::step, bp, {m, 0.0},
                    ShapeTag::single_well(0.5 * ph)),
            Profile::constant(p, Role::density, 1.0)};
  }
  if (!(m > 1.0)) throw DomainError("ratio parameter m must exceed 1");
  return {Profile::constant(p, Role::potential, 0.0),
          Profile(p, Role::density, Interpolation::step, bp, {1.0, std::pow(m, p.value())},
                  ShapeTag::single_barrier(0.5 * ph))};
}

EigenPair step_eigenfunction(const PExponent& p, SecularCase kind, double m, double lambda,
                             int samples) {
  if (samples < 8) throw DomainError("step eigenfunction needs at least 8 samples");
  const double residual = match_residual(p, kind, m, lambda);
  if (!(std::abs(residual) <= 1e-8))
    throw InconsistencyError("lambda does not satisfy the matching condition");

  const double q = p.value();
  const double ph = p.pi_hat();
  const double h = 0.5 * ph;
  // Coefficient lambda rho - q and the density on each side.
  const double rho_left = 1.0;
  const double rho_right = kind == SecularCase::gap ? 1.0 : std::pow(m, q);
  const Branch left(p, kind == SecularCase::gap ? lambda - m : lambda);
  const Branch right(p, lambda * rho_right);

  // Left piece c*yL(x), right piece d*yR(pi_hat - x); c = 1 before normalization.
  const auto [yl, dyl] = left.at(p, h);
  const auto [yr, dyr] = right.at(p, h);
  // Match values unless the right piece is closer to a zero than to a crest there.
  double d;
  if (std::abs(yr) * right.k >= std::abs(dyr)) d = yl / yr;
  else d = -dyl / dyr;

  const double mass = rho_left * left.power_integral(p, h) +
                      rho_right * std::pow(std::abs(d), q) * right.power_integral(p, h);
  const double c = std::pow(mass, -1.0 / q);
  d *= c;

  EigenPair out;
  out.p = q;
  out.lambda = lambda;
  out.scale = c;
  out.norm_residual = std::abs(std::pow(c, q) * mass - 1.0);
  out.xs.reserve(samples + 2);
  for (int i = 0; i <= samples; ++i) out.xs.push_back(ph * i / samples);
  if (samples % 2 != 0) out.xs.insert(std::upper_bound(out.xs.begin(), out.xs.end(), h), h);
  out.xs.back() = ph;
  double peak = 0.0;
  for (double x : out.xs) {
    double y;
    double dy;
    if (x <= h) {
      const auto [v, dv] = left.at(p, x);
      y = c * v;
      dy = c * dv;
    } else {
      const auto [v, dv] = right.at(p, ph - x);
      y = d * v;
      dy = -d * dv;
    }
    out.ys.push_back(y);
    out.vs.push_back(oddpow(dy, q - 1.0));
    peak = std::max(peak, std::abs(y));
  }
  out.endpoint_residual = std::abs(out.ys.back()) / peak;
  out.n = out.interior_sign_changes() + 1;
  return out;
}

}  // namespace plap
