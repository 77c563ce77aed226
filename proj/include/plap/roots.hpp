#pragma once

#include <functional>

namespace plap {

struct RootResult {
  double root;
  double residual;
  int iterations;
};

/// Brent-Dekker root of f on [a, b]; f(a) and f(b) must differ in sign.
///
/// Stops when the bracket is narrower than xtol (absolute) or |f| <= ftol.
/// Throws NumericalError if the end points do not bracket a sign change.
RootResult brent(const std::function<double(double)>& f, double a, double b, double fa,
                 double fb, double xtol, double ftol = 0.0, int max_iter = 200);

inline RootResult brent(const std::function<double(double)>& f, double a, double b,
                        double xtol, double ftol = 0.0, int max_iter = 200) {
  return brent(f, a, b, f(a), f(b), xtol, ftol, max_iter);
}

}  // namespace plap
