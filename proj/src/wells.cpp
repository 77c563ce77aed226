#include "plap/wells.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "plap/error.hpp"
#include "plap/random.hpp"

namespace plap {

namespace {

void check_bounds(double lo, double hi, Role role) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("level bounds must satisfy lo <= hi");
  if (role == Role::density && !(lo > 0.0)) throw DomainError("density levels must be positive");
}

// Sorted uniform cut points strictly inside (x0, x1), count of them = pieces - 1.
std::vector<double> cuts(Rng& rng, double x0, double x1, int pieces) {
  std::vector<double> c;
  for (int i = 0; i + 1 < pieces; ++i) c.push_back(x0 + (x1 - x0) * rng.uniform());
  std::sort(c.begin(), c.end());
  // Drop near-coincident cuts so every cell keeps a usable width.
  const double gap = 1e-6 * (x1 - x0);
  std::vector<double> out;
  double last = x0;
  for (double x : c) {
    if (x - last > gap && x1 - x > gap) {
      out.push_back(x);
      last = x;
    }
  }
  return out;
}

Profile random_shaped(const PExponent& p, double a, double lo, double hi, int cells,
                      std::uint64_t seed, Role role, bool well) {
  const double ph = p.pi_hat();
  if (!(a > 0.0 && a < ph)) throw DomainError("transition point must lie in (0, pi_hat)");
  if (cells < 1) throw DomainError("cells must be at least 1");
  check_bounds(lo, hi, role);
  Rng rng(seed);
  if (cells == 1) return Profile::constant(p, role, rng.uniform(lo, hi));

  const int left = cells / 2;
  const int right = cells - left;
  std::vector<double> bp{0.0};
  for (double x : cuts(rng, 0.0, a, left)) bp.push_back(x);
  bp.push_back(a);
  for (double x : cuts(rng, a, ph, right)) bp.push_back(x);
  bp.push_back(ph);

  const std::size_t n_left =
      static_cast<std::size_t>(std::find(bp.begin(), bp.end(), a) - bp.begin());
  const std::size_t n_cells = bp.size() - 1;
  std::vector<double> lv;
  std::vector<double> rv;
  for (std::size_t i = 0; i < n_left; ++i) lv.push_back(rng.uniform(lo, hi));
  for (std::size_t i = n_left; i < n_cells; ++i) rv.push_back(rng.uniform(lo, hi));
  if (well) {
    std::sort(lv.begin(), lv.end(), std::greater<>());
    std::sort(rv.begin(), rv.end());
  } else {
    std::sort(lv.begin(), lv.end());
    std::sort(rv.begin(), rv.end(), std::greater<>());
  }
  lv.insert(lv.end(), rv.begin(), rv.end());
  const ShapeTag tag = well ? ShapeTag::single_well(a) : ShapeTag::single_barrier(a);
  return Profile(p, role, Interpolation::step, std::move(bp), std::move(lv), tag);
}

}  // namespace

Profile step_profile(const PExponent& p, double left, double right, double split, Role role) {
  const double ph = p.pi_hat();
  if (!(split > 0.0 && split < ph)) throw DomainError("split must lie in (0, pi_hat)");
  if (left == right) return Profile::constant(p, role, left);
  const ShapeTag tag = left > right ? ShapeTag::single_well(split) : ShapeTag::single_barrier(split);
  return Profile(p, role, Interpolation::step, {0.0, split, ph}, {left, right}, tag);
}

Profile random_single_well(const PExponent& p, double a, double lo, double hi, int cells,
                           std::uint64_t seed, Role role) {
  return random_shaped(p, a, lo, hi, cells, seed, role, true);
}

Profile random_single_barrier(const PExponent& p, double a, double lo, double hi, int cells,
                              std::uint64_t seed, Role role) {
  return random_shaped(p, a, lo, hi, cells, seed, role, false);
}

Profile symmetrize(const Profile& f) {
  const double len = f.length();
  std::vector<double> mirrored;
  for (double x : f.breakpoints()) mirrored.push_back(len - x);
  std::reverse(mirrored.begin(), mirrored.end());
  auto grid = merge_breakpoints({f.breakpoints(), mirrored}, 1e-12 * len);
  grid.front() = 0.0;
  grid.back() = len;
  // Force exact mirror symmetry of the grid itself.
  for (std::size_t i = 0, j = grid.size() - 1; i < j; ++i, --j) grid[j] = len - grid[i];
  std::vector<double> vals;
  if (f.interpolation() == Interpolation::step) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double x = 0.5 * (grid[i] + grid[i + 1]);
      vals.push_back(0.5 * (f(x) + f(len - x)));
    }
    for (std::size_t i = 0, j = vals.size() - 1; i < j; ++i, --j) vals[j] = vals[i];
  } else {
    for (double x : grid) vals.push_back(0.5 * (f(x) + f(len - x)));
    for (std::size_t i = 0, j = vals.size() - 1; i < j; ++i, --j) vals[j] = vals[i];
  }
  Profile out(f.exponent(), f.role(), f.interpolation(), std::move(grid), std::move(vals));
  if (out.is_constant()) {
    const double v = out.values().front();
    return Profile::constant(f.exponent(), f.role(), v);
  }
  const double mid = 0.5 * len;
  if (is_single_well(out, mid)) return out.with_shape(ShapeTag::symmetric_single_well(mid));
  if (is_single_barrier(out, mid)) return out.with_shape(ShapeTag::symmetric_single_barrier(mid));
  return out;
}

Profile homotopy(const Profile& base, const Profile& target, double t) {
  if (base.role() != target.role()) throw DomainError("homotopy ends have different roles");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("homotopy parameter must lie in [0, 1]");
  if (t == 0.0) return base;
  if (t == 1.0) return target;
  Profile out = affine_combination(1.0 - t, base, t, target, base.role());
  const ShapeTag& a = base.shape();
  const ShapeTag& b = target.shape();
  auto well_like = [](const ShapeTag& s) {
    return s.kind == ShapeTag::Kind::single_well || s.kind == ShapeTag::Kind::symmetric_single_well;
  };
  auto barrier_like = [](const ShapeTag& s) {
    return s.kind == ShapeTag::Kind::single_barrier ||
           s.kind == ShapeTag::Kind::symmetric_single_barrier;
  };
  auto is_const = [](const ShapeTag& s) { return s.kind == ShapeTag::Kind::constant; };
  // A constant is a well and a barrier about any point.
  const bool wells = (well_like(a) || is_const(a)) && (well_like(b) || is_const(b));
  const bool barriers = (barrier_like(a) || is_const(a)) && (barrier_like(b) || is_const(b));
  double where = a.has_transition() ? a.transition : b.transition;
  if (a.has_transition() && b.has_transition() && a.transition != b.transition) return out;
  if (!a.has_transition() && !b.has_transition()) {
    if (is_const(a) && is_const(b)) return out.with_shape(ShapeTag::constant());
    return out;
  }
  if (wells) return out.with_shape(ShapeTag::single_well(where));
  if (barriers) return out.with_shape(ShapeTag::single_barrier(where));
  return out;
}

}  // namespace plap
