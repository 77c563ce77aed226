#pragma once

#include <cstdint>

#include "plap/profile.hpp"

namespace plap {

/// Two-cell step with a shape tag derived from the levels: single_well(split)
/// when left > right, single_barrier(split) when left < right, constant when equal.
Profile step_profile(const PExponent& p, double left, double right, double split,
                     Role role = Role::potential);

/// Piecewise-constant single well with transition a and levels in [lo, hi].
///
/// The cells are split between [0, a] and [a, pi_hat] (a is always a
/// breakpoint); cut points and levels are uniform draws, levels sorted
/// descending on the left and ascending on the right. cells = 1 gives a
/// constant. Deterministic in seed.
Profile random_single_well(const PExponent& p, double a, double lo, double hi, int cells,
                           std::uint64_t seed, Role role = Role::potential);

/// Mirror image of random_single_well: ascending then descending.
Profile random_single_barrier(const PExponent& p, double a, double lo, double hi, int cells,
                              std::uint64_t seed, Role role = Role::potential);

/// Average of f(x) and f(pi_hat - x) on the mirrored breakpoint grid. The result is tagged
/// symmetric_single_well / _barrier (pi_hat/2) when it passes that validation, else general.
Profile symmetrize(const Profile& f);

/// (1 - t) base + t target on the merged grid; exact copies at t = 0 and t = 1.
/// Keeps a single-well / single-barrier tag when both ends carry it with the same transition.
Profile homotopy(const Profile& base, const Profile& target, double t);

}  // namespace plap
