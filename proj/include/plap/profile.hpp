#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "plap/ptrig.hpp"

namespace plap {

/// Whether a profile plays the potential q or the density rho.
enum class Role { potential, density };

enum class Interpolation { step, linear };

/// Declared shape class of a profile; validated at construction.
struct ShapeTag {
  enum class Kind {
    constant,
    step,
    single_well,
    single_barrier,
    symmetric_single_well,
    symmetric_single_barrier,
    general,
  };
  Kind kind = Kind::general;
  double transition = 0.0;  // only meaningful for the well/barrier kinds

  static ShapeTag constant() { return {Kind::constant, 0.0}; }
  static ShapeTag step() { return {Kind::step, 0.0}; }
  static ShapeTag general() { return {Kind::general, 0.0}; }
  static ShapeTag single_well(double a) { return {Kind::single_well, a}; }
  static ShapeTag single_barrier(double a) { return {Kind::single_barrier, a}; }
  static ShapeTag symmetric_single_well(double a) { return {Kind::symmetric_single_well, a}; }
  static ShapeTag symmetric_single_barrier(double a) { return {Kind::symmetric_single_barrier, a}; }

  bool has_transition() const;
  std::string to_string() const;
  static ShapeTag parse(const std::string& text);
};

/// Affine restriction of a profile to one cell: value(x) = value0 + slope (x - x0).
struct Piece {
  double x0;
  double value0;
  double slope;
  double operator()(double x) const { return value0 + slope * (x - x0); }
};

/// Piecewise coefficient on [0, pi_hat(p)].
///
/// Step profiles carry one value per cell, linear profiles one value per
/// breakpoint. Construction checks ordering, positivity for densities and the
/// declared shape tag, and snaps the end points onto 0 and pi_hat.
class Profile {
 public:
  Profile(PExponent p, Role role, Interpolation interp, std::vector<double> breakpoints,
          std::vector<double> values, ShapeTag tag = ShapeTag::general());

  static Profile constant(PExponent p, Role role, double value);

  const PExponent& exponent() const noexcept { return p_; }
  Role role() const noexcept { return role_; }
  Interpolation interpolation() const noexcept { return interp_; }
  const ShapeTag& shape() const noexcept { return tag_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t cells() const noexcept { return breakpoints_.size() - 1; }
  double length() const noexcept { return breakpoints_.back(); }

  /// Value at x; step profiles are right-continuous except at the right end.
  double operator()(double x) const;
  /// Affine piece valid on the cell containing x (cell chosen right-continuously).
  Piece piece(double x) const;
  /// Affine piece valid on the open interval (a, b), which must lie in one cell.
  Piece piece_on(double a, double b) const;

  double integral() const;
  double mean() const { return integral() / length(); }
  double min_value() const;
  double max_value() const;
  bool is_constant(double tol = 0.0) const;
  bool is_zero() const { return is_constant(0.0) && values_.front() == 0.0; }

  /// Copy with a different shape tag (validated).
  Profile with_shape(ShapeTag tag) const;
  /// Copy with a different role (re-validated).
  Profile with_role(Role role) const;

  /// Stable 64-bit FNV-1a hash of the numeric content.
  std::uint64_t hash() const;

  nlohmann::json to_json() const;
  static Profile from_json(const nlohmann::json& j);

 private:
  void validate() const;
  std::size_t cell_index(double x) const;

  PExponent p_;
  Role role_;
  Interpolation interp_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  ShapeTag tag_;
};

/// Shape predicates used by the validators; tolerance is absolute on values.
bool is_single_well(const Profile& f, double a, double tol = 1e-12);
bool is_single_barrier(const Profile& f, double a, double tol = 1e-12);
bool is_symmetric(const Profile& f, double tol = 1e-12);

/// Sorted union of breakpoint sets, merging points closer than tol.
std::vector<double> merge_breakpoints(std::initializer_list<std::span<const double>> sets,
                                      double tol = 1e-12);

/// alpha * f + beta * g on the merged grid. Both must share interpolation mode
/// (a constant adapts to the other) and domain; the result carries `role` and
/// a general shape tag.
Profile affine_combination(double alpha, const Profile& f, double beta, const Profile& g,
                           Role role);

std::string to_string(Role role);
std::string to_string(Interpolation interp);

}  // namespace plap
