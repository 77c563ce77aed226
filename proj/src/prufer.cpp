#include "plap/prufer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "plap/error.hpp"
#include "plap/roots.hpp"

namespace odeint = boost::numeric::odeint;

namespace plap {

namespace {

using Phase = std::array<double, 1>;
using State = std::vector<double>;

// Largest phase increment (relative to pi_hat) allowed on a step across a non-smooth level.
constexpr double kCrossStep = 1e-7;

template <class S>
auto make_stepper(double tol) {
  return odeint::make_controlled<odeint::runge_kutta_cash_karp54<S>>(tol, tol);
}

// Integrate one cell; odeint failures become NumericalError.
template <class Stepper, class Sys, class S>
void advance(Stepper& stepper, Sys& sys, S& state, double a, double b) {
  if (b <= a) return;
  try {
    odeint::integrate_adaptive(stepper, sys, state, a, b, (b - a) / 16.0);
  } catch (const odeint::odeint_error& e) {
    throw NumericalError(std::string("ODE step control failed: ") + e.what());
  }
}

// Phase integration over [a, b]. The phase right side is only C^1 where sin_p or
// sin_p' vanishes (phi a multiple of `level` = pi_hat/2), and an embedded pair
// under-reports its error on a step that straddles such a level. Steps that
// cross one are halved until the phase moves by less than `hcross` on them.
template <class Stepper, class Sys>
void advance_phase(Stepper& stepper, Sys& sys, std::array<double, 1>& phi, double a, double b,
                   double level, double hcross) {
  if (b <= a) return;
  double x = a;
  double h = (b - a) / 16.0;
  long guard = 0;
  while (x < b) {
    if (++guard > 10'000'000) throw NumericalError("phase integration did not finish");
    const double step = std::min(h, b - x);
    const bool last = step >= b - x;
    std::array<double, 1> trial = phi;
    double xt = x;
    double dt = step;
    if (stepper.try_step(sys, trial, xt, dt) == odeint::fail) {
      h = dt;
      continue;
    }
    if (std::abs(trial[0] - phi[0]) > hcross &&
        std::floor(trial[0] / level) != std::floor(phi[0] / level)) {
      h = 0.5 * step;
      continue;
    }
    phi = trial;
    x = last ? b : xt;
    h = dt;
  }
}

template <class Stepper, class Sys, class S, class Obs>
void advance_times(Stepper& stepper, Sys& sys, S& state, const std::vector<double>& times,
                   Obs obs) {
  if (times.size() < 2) return;
  const double h = (times.back() - times.front()) / 16.0;
  try {
    odeint::integrate_times(stepper, sys, state, times.begin(), times.end(), h, obs);
  } catch (const odeint::odeint_error& e) {
    throw NumericalError(std::string("ODE step control failed: ") + e.what());
  }
}

// Interior sign changes, skipping exact zeros.
int count_sign_changes(const std::vector<double>& ys) {
  int count = 0;
  double last = 0.0;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    if (ys[i] == 0.0) continue;
    if (last != 0.0 && (ys[i] > 0.0) != (last > 0.0)) ++count;
    last = ys[i];
  }
  return count;
}

// Angle of (sin_p(phi), sin_p'(phi) / s) on the same half period as phi. Monotone
// in phi and fixes every multiple of pi_hat / 2, so signs of differences survive.
double rescale_phase(const PExponent& p, double phi, double s) {
  if (s == 1.0) return phi;
  const double ph = p.pi_hat();
  const double j = std::floor(phi / ph);
  const double r = phi - j * ph;
  const TrigValue v = sin_p(p, r);
  if (v.s == 0.0 && v.c == 0.0) return phi;
  return j * ph + phase_angle(p, std::abs(v.s), v.c / s);
}

}  // namespace

double phase_rhs(const PExponent& p, double phi, double lambda, double rho_x, double q_x) {
  const TrigValue t = sin_p(p, phi);
  const double s = std::pow(std::abs(t.s), p.value());
  const double c = std::pow(std::abs(t.c), p.value());
  return c + (lambda * rho_x - q_x) * s;
}

double EigenPair::derivative(std::size_t i) const { return oddpow(vs[i], 1.0 / (p - 1.0)); }

double EigenPair::value_at(double x) const {
  if (xs.empty()) throw DomainError("empty eigenfunction");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ys[i] + (t3 - 2 * t2 + t) * h * derivative(i) +
         (-2 * t3 + 3 * t2) * ys[i + 1] + (t3 - t2) * h * derivative(i + 1);
}

int EigenPair::interior_sign_changes() const { return count_sign_changes(ys); }

std::vector<double> EigenPair::interior_zeros() const {
  std::vector<double> zeros;
  for (std::size_t i = 1; i + 2 < xs.size(); ++i) {
    if (ys[i] == 0.0) {
      zeros.push_back(xs[i]);
      continue;
    }
    if ((ys[i] > 0.0) == (ys[i + 1] > 0.0) || ys[i + 1] == 0.0) continue;
    const auto f = [this](double x) { return value_at(x); };
    zeros.push_back(brent(f, xs[i], xs[i + 1], ys[i], ys[i + 1], 1e-15).root);
  }
  return zeros;
}

PruferSolver::PruferSolver(const Profile& q, const Profile& rho, SolverOptions options)
    : p_(q.exponent()), q_(q), rho_(rho), options_(options), table_(q.exponent()) {
  if (!(q.exponent() == rho.exponent())) throw DomainError("q and rho use different exponents");
  if (q.role() != Role::potential) throw DomainError("first profile must be a potential");
  if (rho.role() != Role::density) throw DomainError("second profile must be a density");
  if (!(options_.ode_tol > 0.0) || !(options_.phase_tol > 0.0))
    throw DomainError("solver tolerances must be positive");
  if (options_.min_samples < 8) throw DomainError("min_samples must be at least 8");
  std::vector<std::vector<Piece>> unused;
  cells_ = cells_for({}, unused);
}

std::vector<PruferSolver::Cell> PruferSolver::cells_for(
    const std::vector<Profile>& weights, std::vector<std::vector<Piece>>& weight_pieces) const {
  std::vector<double> grid = merge_breakpoints({q_.breakpoints(), rho_.breakpoints()});
  for (const auto& w : weights) {
    if (!(w.exponent() == p_)) throw DomainError("weight uses a different exponent");
    grid = merge_breakpoints({grid, w.breakpoints()});
  }
  grid.front() = 0.0;
  grid.back() = p_.pi_hat();
  std::vector<Cell> cells;
  weight_pieces.assign(weights.size(), {});
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    cells.push_back({a, b, q_.piece_on(a, b), rho_.piece_on(a, b)});
    for (std::size_t k = 0; k < weights.size(); ++k)
      weight_pieces[k].push_back(weights[k].piece_on(a, b));
  }
  return cells;
}

double PruferSolver::terminal_phase(double lambda) const {
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  auto stepper = make_stepper<Phase>(options_.ode_tol);
  const double level = 0.5 * p_.pi_hat();
  const double hcross = kCrossStep * p_.pi_hat();
  Phase phi{0.0};
  for (const Cell& cell : cells_) {
    auto sys = [&](const Phase& s, Phase& ds, double x) {
      const auto pw = table_(s[0]);
      ds[0] = pw.cos_pow + (lambda * cell.rho(x) - cell.q(x)) * pw.sin_pow;
    };
    advance_phase(stepper, sys, phi, cell.a, cell.b, level, hcross);
  }
  return phi[0];
}

double PruferSolver::matching_phase(double lambda, int n, double x_m) const {
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  const double len = p_.pi_hat();
  if (!(x_m > 0.0 && x_m < len)) throw DomainError("matching point must lie in (0, pi_hat)");
  const double level = 0.5 * len;
  const double hcross = kCrossStep * len;
  auto stepper = make_stepper<Phase>(options_.ode_tol);

  Phase left{0.0};
  for (const Cell& cell : cells_) {
    if (cell.a >= x_m) break;
    auto sys = [&](const Phase& s, Phase& ds, double x) {
      const auto pw = table_(s[0]);
      ds[0] = pw.cos_pow + (lambda * cell.rho(x) - cell.q(x)) * pw.sin_pow;
    };
    advance_phase(stepper, sys, left, cell.a, std::min(cell.b, x_m), level, hcross);
  }

  // Backward leg in s = pi_hat - x, so the stepper still runs forward.
  auto back_stepper = make_stepper<Phase>(options_.ode_tol);
  Phase right{n * len};
  for (auto it = cells_.rbegin(); it != cells_.rend(); ++it) {
    const Cell& cell = *it;
    if (cell.b <= x_m) break;
    auto sys = [&](const Phase& s, Phase& ds, double t) {
      const double x = len - t;
      const auto pw = table_(s[0]);
      ds[0] = -(pw.cos_pow + (lambda * cell.rho(x) - cell.q(x)) * pw.sin_pow);
    };
    advance_phase(back_stepper, sys, right, len - cell.b, len - std::max(cell.a, x_m), level,
                  hcross);
  }
  // Both phases are re-measured against the local frequency at x_m. Raw phases
  // race through crests at speed ~ lambda rho - q, so an error that is tiny in x
  // is large in phi there; the rescaled angle moves at a uniform rate instead.
  const Cell& at = *std::find_if(cells_.begin(), cells_.end(),
                                 [&](const Cell& c) { return x_m < c.b; });
  const double k = lambda * at.rho(x_m) - at.q(x_m);
  const double s = std::pow(std::max(k, 1.0), 1.0 / p_.value());
  return rescale_phase(p_, left[0], s) - rescale_phase(p_, right[0], s);
}

double PruferSolver::matching_point(double lambda) const {
  double best = -std::numeric_limits<double>::infinity();
  double where = 0.5 * p_.pi_hat();
  for (const Cell& cell : cells_) {
    const double x = 0.5 * (cell.a + cell.b);
    const double k = lambda * cell.rho(x) - cell.q(x);
    if (k > best) {
      best = k;
      where = x;
    }
  }
  return where;
}

PhasePath PruferSolver::phase_path(double lambda, int samples) const {
  if (samples < 2) throw DomainError("phase path needs at least two samples");
  const double len = p_.pi_hat();
  std::vector<double> targets(samples);
  for (int i = 0; i < samples; ++i) targets[i] = len * i / (samples - 1);
  targets.back() = len;

  PhasePath path{{0.0}, {0.0}};
  auto stepper = make_stepper<Phase>(options_.ode_tol);
  const double level = 0.5 * len;
  const double hcross = kCrossStep * len;
  Phase phi{0.0};
  std::size_t next = 1;
  for (const Cell& cell : cells_) {
    auto sys = [&](const Phase& s, Phase& ds, double x) {
      const auto pw = table_(s[0]);
      ds[0] = pw.cos_pow + (lambda * cell.rho(x) - cell.q(x)) * pw.sin_pow;
    };
    std::vector<double> times{cell.a};
    std::vector<bool> keep{false};
    while (next < targets.size() && targets[next] <= cell.b) {
      if (targets[next] > cell.a) {
        times.push_back(targets[next]);
        keep.push_back(true);
      }
      ++next;
    }
    if (times.back() != cell.b) {
      times.push_back(cell.b);
      keep.push_back(false);
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
      advance_phase(stepper, sys, phi, times[i - 1], times[i], level, hcross);
      if (keep[i]) {
        path.xs.push_back(times[i]);
        path.phis.push_back(phi[0]);
      }
    }
  }
  return path;
}

double PruferSolver::eigenvalue(int n) const {
  if (n < 1) throw DomainError("eigenvalue index must be >= 1");
  // Exact for constant coefficients; a starting centre otherwise.
  const double np = std::pow(static_cast<double>(n), p_.value());
  const double centre = (np + q_.mean()) / rho_.mean();
  const double x_m = matching_point(centre);
  std::vector<std::pair<double, double>> seen;
  auto g = [&](double lambda) {
    const double v = matching_phase(lambda, n, x_m);
    seen.emplace_back(lambda, v);
    return v;
  };
  double step = 0.05 * std::max(1.0, std::abs(centre));
  double lo = centre;
  double hi = centre;
  double glo = g(lo);
  double ghi = glo;
  int budget = options_.max_bracket_steps;
  if (glo == 0.0) return centre;
  if (glo < 0.0) {
    while (ghi < 0.0) {
      if (--budget < 0) throw BracketError("eigenvalue bracket expansion exhausted");
      lo = hi;
      glo = ghi;
      hi += step;
      step *= 2.0;
      ghi = g(hi);
    }
  } else {
    while (glo > 0.0) {
      if (--budget < 0) throw BracketError("eigenvalue bracket expansion exhausted");
      hi = lo;
      ghi = glo;
      lo -= step;
      step *= 2.0;
      glo = g(lo);
    }
  }
  if (ghi == 0.0) return hi;
  if (glo == 0.0) return lo;

  const double xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi));
  const RootResult r = brent(g, lo, hi, glo, ghi, xtol, options_.phase_tol);

  // The mismatch must change sign once: no lambda above a clearly positive value may
  // give a clearly negative one. "Clearly" allows phase noise of a few ODE tolerances.
  std::sort(seen.begin(), seen.end());
  const double slack = 1e3 * options_.ode_tol * n;
  double running = -std::numeric_limits<double>::infinity();
  for (const auto& [lambda, v] : seen) {
    if (running > slack && v < -slack)
      throw NumericalError("matching phase changes sign more than once in lambda");
    running = std::max(running, v);
  }
  if (std::abs(r.residual) > 100.0 * options_.phase_tol)
    throw NumericalError("eigenvalue phase residual above tolerance");
  return r.root;
}

EigenPair PruferSolver::eigenfunction(double lambda_n, int n) const {
  if (n < 1) throw DomainError("eigenvalue index must be >= 1");
  const double p = p_.value();
  const double len = p_.pi_hat();
  const double ystep = 1.0 / (p - 1.0);

  auto make_sys = [&](const Cell& cell, bool accumulate) {
    return [&, cell, accumulate](const State& s, State& ds, double x) {
      const double k = (lambda_n * cell.rho(x) - cell.q(x));
      ds[0] = oddpow(s[1], ystep);
      ds[1] = -(p - 1.0) * k * oddpow(s[0], p - 1.0);
      if (accumulate) ds[2] = cell.rho(x) * std::pow(std::abs(s[0]), p);
    };
  };

  EigenPair out;
  out.p = p;
  out.n = n;
  out.lambda = lambda_n;

  // Coarse pass: uniform samples plus every cell boundary.
  const int m = options_.min_samples;
  const double min_gap = 1e-9 * len;
  auto stepper = make_stepper<State>(options_.ode_tol);
  State state{0.0, 1.0, 0.0};
  std::vector<std::size_t> cell_of;  // cell index of the interval starting at each sample
  out.xs.push_back(0.0);
  out.ys.push_back(0.0);
  out.vs.push_back(1.0);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    std::vector<double> times{cell.a};
    const int first = static_cast<int>(std::floor(cell.a / len * m)) + 1;
    for (int i = first; i < m; ++i) {
      const double x = len * i / m;
      if (x >= cell.b - min_gap) break;
      if (x > cell.a + min_gap) times.push_back(x);
    }
    times.push_back(cell.b);
    auto sys = make_sys(cell, true);
    std::size_t idx = 0;
    advance_times(stepper, sys, state, times, [&](const State& s, double x) {
      if (idx++ == 0) return;
      out.xs.push_back(x);
      out.ys.push_back(s[0]);
      out.vs.push_back(s[1]);
      cell_of.push_back(c);
    });
  }
  out.xs.back() = len;
  const double norm = state[2];

  // Refine every sample interval that holds a sign change.
  if (options_.zero_refinement > 1) {
    std::vector<double> xs{out.xs.front()};
    std::vector<double> ys{out.ys.front()};
    std::vector<double> vs{out.vs.front()};
    for (std::size_t i = 0; i + 1 < out.xs.size(); ++i) {
      const bool interior = i > 0 && i + 2 < out.xs.size();
      const bool flips = interior && out.ys[i] != 0.0 &&
                         ((out.ys[i] > 0.0) != (out.ys[i + 1] > 0.0) || out.ys[i + 1] == 0.0);
      if (flips) {
        const int r = options_.zero_refinement;
        std::vector<double> times(r + 1);
        for (int k = 0; k <= r; ++k)
          times[k] = out.xs[i] + (out.xs[i + 1] - out.xs[i]) * k / r;
        times.back() = out.xs[i + 1];
        State local{out.ys[i], out.vs[i]};
        auto local_stepper = make_stepper<State>(options_.ode_tol);
        auto sys = make_sys(cells_[cell_of[i]], false);
        int idx = 0;
        advance_times(local_stepper, sys, local, times, [&](const State& s, double x) {
          ++idx;
          if (idx == 1 || idx == r + 1) return;
          xs.push_back(x);
          ys.push_back(s[0]);
          vs.push_back(s[1]);
        });
      }
      xs.push_back(out.xs[i + 1]);
      ys.push_back(out.ys[i + 1]);
      vs.push_back(out.vs[i + 1]);
    }
    out.xs = std::move(xs);
    out.ys = std::move(ys);
    out.vs = std::move(vs);
  }

  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("eigenfunction norm degenerate");
  out.scale = std::pow(norm, -1.0 / p);
  const double vscale = std::pow(out.scale, p - 1.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < out.xs.size(); ++i) {
    out.ys[i] *= out.scale;
    out.vs[i] *= vscale;
    peak = std::max(peak, std::abs(out.ys[i]));
  }
  out.norm_residual = std::abs(norm * std::pow(out.scale, p) - 1.0);
  out.endpoint_residual = std::abs(out.ys.back()) / peak;

  const int zeros = out.interior_sign_changes();
  if (zeros != n - 1)
    throw IndexMismatchError("eigenfunction " + std::to_string(n) + " has " +
                                 std::to_string(zeros) + " interior zeros",
                             n - 1, zeros);
  return out;
}

std::vector<EigenPair> PruferSolver::spectrum(int n_max) const {
  if (n_max < 1) throw DomainError("spectrum needs n_max >= 1");
  std::vector<EigenPair> out;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(eigenfunction(eigenvalue(n), n));
    if (n > 1 && !(out[n - 1].lambda > out[n - 2].lambda))
      throw NumericalError("spectrum is not strictly increasing");
  }
  return out;
}

std::array<double, 2> PruferSolver::state_at(const EigenPair& pair, double x) const {
  const double len = p_.pi_hat();
  if (!(x >= 0.0 && x <= len)) throw DomainError("state_at: x outside [0, pi_hat]");
  if (pair.xs.size() < 2) throw DomainError("state_at: empty eigenpair");
  auto it = std::upper_bound(pair.xs.begin(), pair.xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - pair.xs.begin());
  i = i == 0 ? 0 : i - 1;
  if (i + 1 == pair.xs.size()) --i;
  const double x0 = pair.xs[i];
  if (x == x0) return {pair.ys[i], pair.vs[i]};
  // The sample grid contains every breakpoint, so [x0, x] lies in one cell.
  const double mid = 0.5 * (x0 + x);
  const auto cell = std::upper_bound(cells_.begin(), cells_.end(), mid,
                                     [](double v, const Cell& c) { return v < c.b; });
  const Cell& c = cell == cells_.end() ? cells_.back() : *cell;
  const double p = p_.value();
  const double ystep = 1.0 / (p - 1.0);
  const double lambda = pair.lambda;
  auto sys = [&](const State& s, State& ds, double t) {
    ds[0] = oddpow(s[1], ystep);
    ds[1] = -(p - 1.0) * (lambda * c.rho(t) - c.q(t)) * oddpow(s[0], p - 1.0);
  };
  State s{pair.ys[i], pair.vs[i]};
  auto stepper = make_stepper<State>(options_.ode_tol);
  advance(stepper, sys, s, x0, x);
  return {s[0], s[1]};
}

std::vector<double> PruferSolver::moments(const EigenPair& pair,
                                          const std::vector<Profile>& weights) const {
  const double p = p_.value();
  const double ystep = 1.0 / (p - 1.0);
  const double lambda = pair.lambda;
  std::vector<std::vector<Piece>> wp;
  const auto cells = cells_for(weights, wp);
  const std::size_t k = weights.size();
  auto stepper = make_stepper<State>(options_.ode_tol);
  State state(2 + k, 0.0);
  state[1] = 1.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    auto sys = [&](const State& s, State& ds, double x) {
      ds[0] = oddpow(s[1], ystep);
      ds[1] = -(p - 1.0) * (lambda * cell.rho(x) - cell.q(x)) * oddpow(s[0], p - 1.0);
      const double yp = std::pow(std::abs(s[0]), p);
      for (std::size_t j = 0; j < k; ++j) ds[2 + j] = wp[j][c](x) * yp;
    };
    advance(stepper, sys, state, cell.a, cell.b);
  }
  const double sp = std::pow(pair.scale, p);
  std::vector<double> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = state[2 + j] * sp;
  return out;
}

double PruferSolver::moment(const EigenPair& pair, const Profile& weight) const {
  return moments(pair, {weight}).front();
}

double terminal_phase(const PExponent& p, const Profile& q, const Profile& rho, double lambda) {
  if (!(q.exponent() == p)) throw DomainError("profile exponent differs from p");
  return PruferSolver(q, rho).terminal_phase(lambda);
}

double eigenvalue(const PExponent& p, const Profile& q, const Profile& rho, int n) {
  if (!(q.exponent() == p)) throw DomainError("profile exponent differs from p");
  return PruferSolver(q, rho).eigenvalue(n);
}

EigenPair eigenfunction(const PExponent& p, const Profile& q, const Profile& rho,
                        double lambda_n, int n) {
  if (!(q.exponent() == p)) throw DomainError("profile exponent differs from p");
  return PruferSolver(q, rho).eigenfunction(lambda_n, n);
}

std::vector<EigenPair> spectrum(const PExponent& p, const Profile& q, const Profile& rho,
                                int n_max) {
  if (!(q.exponent() == p)) throw DomainError("profile exponent differs from p");
  return PruferSolver(q, rho).spectrum(n_max);
}

}  // namespace plap
