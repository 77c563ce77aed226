#include "plap/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "plap/error.hpp"

namespace plap {
namespace {

constexpr double kSnapTol = 1e-9;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool monotone(const std::vector<double>& v, bool increasing, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (increasing ? v[i] < v[i - 1] - tol : v[i] > v[i - 1] + tol) return false;
  }
  return true;
}

// Values seen by the profile on [lo, hi], in order. For step profiles these
// are the cell levels meeting the interval with positive length; for linear
// profiles the interior nodes plus the two end values.
std::vector<double> values_on(const Profile& f, double lo, double hi) {
  std::vector<double> out;
  const auto bp = f.breakpoints();
  const auto vals = f.values();
  if (hi - lo <= 1e-12) return out;
  if (f.interpolation() == Interpolation::step) {
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      if (bp[i + 1] > lo + 1e-12 && bp[i] < hi - 1e-12) out.push_back(vals[i]);
    }
  } else {
    out.push_back(f(lo));
    for (std::size_t i = 0; i < bp.size(); ++i) {
      if (bp[i] > lo + 1e-12 && bp[i] < hi - 1e-12) out.push_back(vals[i]);
    }
    out.push_back(f(hi));
  }
  return out;
}

}  // namespace

bool ShapeTag::has_transition() const {
  return kind == Kind::single_well || kind == Kind::single_barrier ||
         kind == Kind::symmetric_single_well || kind == Kind::symmetric_single_barrier;
}

std::string ShapeTag::to_string() const {
  switch (kind) {
    case Kind::constant: return "constant";
    case Kind::step: return "step";
    case Kind::general: return "general";
    case Kind::single_well: return "single_well(" + format_double(transition) + ")";
    case Kind::single_barrier: return "single_barrier(" + format_double(transition) + ")";
    case Kind::symmetric_single_well:
      return "symmetric_single_well(" + format_double(transition) + ")";
    case Kind::symmetric_single_barrier:
      return "symmetric_single_barrier(" + format_double(transition) + ")";
  }
  return "general";
}

ShapeTag ShapeTag::parse(const std::string& text) {
  if (text == "constant") return constant();
  if (text == "step") return step();
  if (text == "general") return general();
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw DomainError("unknown shape tag '" + text + "'");
  }
  const std::string name = text.substr(0, open);
  const std::string arg = text.substr(open + 1, text.size() - open - 2);
  double a = 0.0;
  try {
    std::size_t used = 0;
    a = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw DomainError("bad transition point in shape tag '" + text + "'");
  }
  if (name == "single_well") return single_well(a);
  if (name == "single_barrier") return single_barrier(a);
  if (name == "symmetric_single_well") return symmetric_single_well(a);
  if (name == "symmetric_single_barrier") return symmetric_single_barrier(a);
  throw DomainError("unknown shape tag '" + text + "'");
}

Profile::Profile(PExponent p, Role role, Interpolation interp, std::vector<double> breakpoints,
                 std::vector<double> values, ShapeTag tag)
    : p_(p),
      role_(role),
      interp_(interp),
      breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      tag_(tag) {
  if (breakpoints_.size() < 2) throw DomainError("profile needs at least two breakpoints");
  const double ph = p_.pi_hat();
  if (std::abs(breakpoints_.front()) > kSnapTol) {
    throw DomainError("profile must start at 0, got " + format_double(breakpoints_.front()));
  }
  if (std::abs(breakpoints_.back() - ph) > kSnapTol * ph) {
    throw DomainError("profile must end at pi_hat = " + format_double(ph) + ", got " +
                      format_double(breakpoints_.back()));
  }
  breakpoints_.front() = 0.0;
  breakpoints_.back() = ph;
  validate();
}

Profile Profile::constant(PExponent p, Role role, double value) {
  return Profile(p, role, Interpolation::step, {0.0, p.pi_hat()}, {value}, ShapeTag::constant());
}

void Profile::validate() const {
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw DomainError("profile breakpoints must be strictly increasing");
    }
  }
  const std::size_t want = interp_ == Interpolation::step ? cells() : breakpoints_.size();
  if (values_.size() != want) {
    throw DomainError("profile has " + std::to_string(values_.size()) + " values, expected " +
                      std::to_string(want));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("profile values must be finite");
    if (role_ == Role::density && !(v > 0.0)) {
      throw DomainError("density profile must be positive, got " + format_double(v));
    }
  }
  const double ph = p_.pi_hat();
  if (tag_.has_transition() && !(tag_.transition >= 0.0 && tag_.transition <= ph)) {
    throw DomainError("transition point outside [0, pi_hat]");
  }
  bool ok = true;
  switch (tag_.kind) {
    case ShapeTag::Kind::constant: ok = is_constant(1e-12); break;
    case ShapeTag::Kind::step:
    case ShapeTag::Kind::general: break;
    case ShapeTag::Kind::single_well: ok = is_single_well(*this, tag_.transition); break;
    case ShapeTag::Kind::single_barrier: ok = is_single_barrier(*this, tag_.transition); break;
    case ShapeTag::Kind::symmetric_single_well:
      ok = is_single_well(*this, tag_.transition) && is_symmetric(*this);
      break;
    case ShapeTag::Kind::symmetric_single_barrier:
      ok = is_single_barrier(*this, tag_.transition) && is_symmetric(*this);
      break;
  }
  if (!ok) throw DomainError("profile does not match its shape tag " + tag_.to_string());
}

std::size_t Profile::cell_index(double x) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto idx = static_cast<std::ptrdiff_t>(it - breakpoints_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, cells() - 1));
}

double Profile::operator()(double x) const { return piece(x)(x); }

Piece Profile::piece(double x) const {
  const std::size_t i = cell_index(x);
  if (interp_ == Interpolation::step) return {breakpoints_[i], values_[i], 0.0};
  const double slope =
      (values_[i + 1] - values_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
  return {breakpoints_[i], values_[i], slope};
}

Piece Profile::piece_on(double a, double b) const { return piece(0.5 * (a + b)); }

double Profile::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < cells(); ++i) {
    const double h = breakpoints_[i + 1] - breakpoints_[i];
    acc += interp_ == Interpolation::step ? values_[i] * h
                                          : 0.5 * (values_[i] + values_[i + 1]) * h;
  }
  return acc;
}

double Profile::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Profile::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

bool Profile::is_constant(double tol) const { return max_value() - min_value() <= tol; }

Profile Profile::with_shape(ShapeTag tag) const {
  return Profile(p_, role_, interp_, breakpoints_, values_, tag);
}

Profile Profile::with_role(Role role) const {
  return Profile(p_, role, interp_, breakpoints_, values_, tag_);
}

std::uint64_t Profile::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const double pv = p_.value();
  const int meta[2] = {static_cast<int>(role_), static_cast<int>(interp_)};
  mix(&pv, sizeof pv);
  mix(meta, sizeof meta);
  mix(breakpoints_.data(), breakpoints_.size() * sizeof(double));
  mix(values_.data(), values_.size() * sizeof(double));
  return h;
}

nlohmann::json Profile::to_json() const {
  return {
      {"p", p_.value()},
      {"role", plap::to_string(role_)},
      {"interpolation", plap::to_string(interp_)},
      {"breakpoints", breakpoints_},
      {"values", values_},
      {"shape_tag", tag_.to_string()},
  };
}

Profile Profile::from_json(const nlohmann::json& j) {
  try {
    const std::string role = j.at("role").get<std::string>();
    const std::string interp = j.at("interpolation").get<std::string>();
    if (role != "q" && role != "rho") throw DomainError("profile role must be q or rho");
    if (interp != "step" && interp != "linear") {
      throw DomainError("profile interpolation must be step or linear");
    }
    ShapeTag tag = ShapeTag::general();
    if (j.contains("shape_tag")) tag = ShapeTag::parse(j.at("shape_tag").get<std::string>());
    return Profile(PExponent(j.at("p").get<double>()),
                   role == "q" ? Role::potential : Role::density,
                   interp == "step" ? Interpolation::step : Interpolation::linear,
                   j.at("breakpoints").get<std::vector<double>>(),
                   j.at("values").get<std::vector<double>>(), tag);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed profile record: ") + e.what());
  }
}

bool is_single_well(const Profile& f, double a, double tol) {
  return monotone(values_on(f, 0.0, a), false, tol) &&
         monotone(values_on(f, a, f.length()), true, tol);
}

bool is_single_barrier(const Profile& f, double a, double tol) {
  return monotone(values_on(f, 0.0, a), true, tol) &&
         monotone(values_on(f, a, f.length()), false, tol);
}

bool is_symmetric(const Profile& f, double tol) {
  const double len = f.length();
  std::vector<double> mirrored(f.breakpoints().begin(), f.breakpoints().end());
  for (double& x : mirrored) x = len - x;
  std::reverse(mirrored.begin(), mirrored.end());
  const auto grid = merge_breakpoints({f.breakpoints(), mirrored}, 1e-10);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double x = 0.5 * (grid[i] + grid[i + 1]);
    if (std::abs(f(x) - f(len - x)) > tol) return false;
  }
  return true;
}

std::vector<double> merge_breakpoints(std::initializer_list<std::span<const double>> sets,
                                      double tol) {
  std::vector<double> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

Profile affine_combination(double alpha, const Profile& f, double beta, const Profile& g,
                           Role role) {
  if (!(f.exponent() == g.exponent())) throw DomainError("profiles have different exponents");
  if (f.interpolation() != g.interpolation()) {
    // A constant is representable in either mode.
    auto as_linear = [](const Profile& c) {
      const double v = c.values().front();
      return Profile(c.exponent(), c.role(), Interpolation::linear, {0.0, c.length()}, {v, v},
                     ShapeTag::constant());
    };
    if (f.interpolation() == Interpolation::step && f.is_constant())
      return affine_combination(alpha, as_linear(f), beta, g, role);
    if (g.interpolation() == Interpolation::step && g.is_constant())
      return affine_combination(alpha, f, beta, as_linear(g), role);
    throw DomainError("profiles must share an interpolation mode");
  }
  auto grid = merge_breakpoints({f.breakpoints(), g.breakpoints()});
  grid.front() = 0.0;
  grid.back() = f.length();
  std::vector<double> vals;
  if (f.interpolation() == Interpolation::step) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double x = 0.5 * (grid[i] + grid[i + 1]);
      vals.push_back(alpha * f(x) + beta * g(x));
    }
  } else {
    for (double x : grid) vals.push_back(alpha * f(x) + beta * g(x));
  }
  return Profile(f.exponent(), role, f.interpolation(), std::move(grid), std::move(vals));
}

std::string to_string(Role role) { return role == Role::potential ? "q" : "rho"; }

std::string to_string(Interpolation interp) {
  return interp == Interpolation::step ? "step" : "linear";
}

}  // namespace plap
