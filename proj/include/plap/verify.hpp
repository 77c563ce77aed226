#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "plap/prufer.hpp"
#include "plap/secular.hpp"

namespace plap {

/// Sign changes of |y2|^p - |y1|^p in (0, pi_hat).
struct IntersectionPattern {
  std::vector<double> crossings;
  std::vector<double> contacts;  // touching without a sign change; not counted
};

/// Scans |y2|^p - |y1|^p on the union of both sample grids and bisects each
/// sign change on re-integrated values down to `xtol`. Both pairs must come
/// from `solver` with indices 1 and 2.
IntersectionPattern intersection_pattern(const PruferSolver& solver, const EigenPair& y1,
                                         const EigenPair& y2, double xtol = 1e-10);

/// One evaluated sample of a battery.
struct SampleRow {
  std::string id;
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double value = 0.0;   // gap or ratio
  double margin = 0.0;  // signed distance to the bound, positive on the safe side
  int crossings = -1;   // -1 when not measured
};

struct Violation {
  std::string id;
  std::string kind;
  double measured = 0.0;
  double bound = 0.0;
};

struct BatteryReport {
  std::string suite;
  double p = 2.0;
  int samples = 0;
  std::uint64_t seed = 0;
  bool gating = true;  // exploratory suites report but do not fail
  std::vector<SampleRow> rows;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  std::map<std::string, double> summary;
  double min_margin = 0.0;
  double runtime_ms = 0.0;

  bool passed() const { return !gating || violations.empty(); }
  /// Sorts rows and violations by id and recomputes min_margin.
  void finish();
  nlohmann::json to_json() const;
  /// One line per row: id,seed,hash,lambda1,lambda2,value,margin,crossings.
  std::string to_csv() const;
};

/// Ranges of the random coefficients used by the batteries.
struct BatteryOptions {
  int samples = 200;
  std::uint64_t seed = 42;
  double q_lo = 0.0;    // potentials in [q_lo, q_hi]
  double q_hi = 10.0;
  double rho_lo = 0.25;  // densities in [rho_lo, rho_hi]
  double rho_hi = 4.0;
  int max_cells = 8;     // samples draw 2..max_cells cells (4.. for the symmetric suites)
  int homotopy_samples = 20;  // symmetric-well samples that also run the homotopy check
  double homotopy_eps = 1.0;
  double bound_tol = 1e-6;
  double equality_tol = 1e-8;
  double derivative_tol = 1e-8;
  double identity_tol = 1e-7;
  double symmetry_tol = 1e-6;
  bool intersections = true;
  SolverOptions solver;
};

/// lambda2 - lambda1 >= 2^p - 1 over random single wells with transition pi_hat/2, rho = 1,
/// plus equality for constant potentials.
BatteryReport check_gap_bound(const PExponent& p, const BatteryOptions& opt = {});

/// Ratio suites with q = 0: "barrier" (mu2/mu1 >= 2^p), "symmetric_well" (mu2/mu1 <= 2^p,
/// with the eps-homotopy derivative check) and the exploratory "symmetric_barrier".
BatteryReport check_ratio_bound(const PExponent& p, const std::string& suite,
                                const BatteryOptions& opt = {});

struct Counterexample {
  double a = 0.0;
  double t = 0.0;
  double value = 0.0;  // gap or ratio at (a, t)
  double bound = 0.0;  // 2^p - 1 or 2^p
  Profile profile;
};

/// q = t on (0, a), 0 after, over a in pi_hat/2 + {0.05, ..., 0.3}, t in {0.25, ..., 2};
/// returns the grid point with the smallest gap. SearchFailure if no gap falls below
/// 2^p - 1 - margin.
Counterexample find_gap_counterexample(const PExponent& p, double margin = 1e-3,
                                       SolverOptions options = {});

/// rho = t on (0, a), 1 after, over a in pi_hat/2 - {0.05, ..., 0.3}, t in {1.25, ..., 3};
/// returns the smallest ratio. SearchFailure if none falls below 2^p - margin.
Counterexample find_ratio_counterexample(const PExponent& p, double margin = 1e-3,
                                         SolverOptions options = {});

/// Root functional of the secular case on a log-spaced grid of m (gap: m in [m_lo, m_hi];
/// ratio: m - 1 in [m_lo, m_hi - 1]). Rows carry the value and its increment as margin.
/// Also checks f_char strictly decreasing on pole-free cells.
BatteryReport monotonicity_scan(const PExponent& p, SecularCase kind, int grid, double m_lo,
                                double m_hi, double slack = 1e-9);

/// max over n = 1, 2 of the relative difference between secular and shooting eigenvalues of
/// the step problem with parameter m. InconsistencyError above 1e-6.
double cross_validate(const PExponent& p, SecularCase kind, double m, SolverOptions options = {});

}  // namespace plap
