#pragma once

#include <array>
#include <vector>

#include "plap/profile.hpp"
#include "plap/ptrig.hpp"

namespace plap {

/// Tolerances of the shooting solver.
struct SolverOptions {
  double ode_tol = 1e-13;      // absolute and relative tolerance of the RK5(4) stepper
  double phase_tol = 1e-12;    // target |phi(pi_hat) - n pi_hat| for eigenvalues
  int min_samples = 1024;      // output cells for eigenfunctions, before zero refinement
  int zero_refinement = 16;    // sub-cells inserted in each cell containing a zero
  int max_bracket_steps = 200;
};

/// Normalized Dirichlet eigenpair sampled on a grid of [0, pi_hat].
struct EigenPair {
  double p = 2.0;
  int n = 0;
  double lambda = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> vs;      // quasi-derivative oddpow(y', p - 1)
  double norm_residual = 0.0;  // |int rho |y|^p - 1| as integrated
  double endpoint_residual = 0.0;  // |y(pi_hat)| / max |y|
  double scale = 1.0;  // factor applied to the raw shot with y'(0) = 1

  double derivative(std::size_t i) const;
  /// Cubic Hermite interpolant of y built from (y, y') at the samples.
  double value_at(double x) const;
  /// Number of strict sign changes of y over the interior samples.
  int interior_sign_changes() const;
  /// Interior zeros located on the interpolant.
  std::vector<double> interior_zeros() const;
};

struct PhasePath {
  std::vector<double> xs;
  std::vector<double> phis;
};

/// Right side of the Prufer phase equation:
/// |sin_p'(phi)|^p + (lambda rho - q) |sin_p(phi)|^p.
double phase_rhs(const PExponent& p, double phi, double lambda, double rho_x, double q_x);

/// Shooting solver for -(y'^(p-1))' = (p-1)(lambda rho - q) y^(p-1), y(0) = y(pi_hat) = 0.
///
/// Integration is split at every breakpoint of q and rho, so each RK step sees
/// an affine coefficient. All members are const after construction.
class PruferSolver {
 public:
  PruferSolver(const Profile& q, const Profile& rho, SolverOptions options = {});

  const PExponent& exponent() const noexcept { return p_; }
  const Profile& potential() const noexcept { return q_; }
  const Profile& density() const noexcept { return rho_; }
  const SolverOptions& options() const noexcept { return options_; }

  /// phi(pi_hat) for phi(0) = 0; strictly increasing in lambda.
  double terminal_phase(double lambda) const;
  PhasePath phase_path(double lambda, int samples) const;

  /// lambda_n, the unique lambda with terminal_phase(lambda) = n pi_hat.
  double eigenvalue(int n) const;

  /// Phase mismatch at x_m between the forward phase from phi(0) = 0 and the
  /// backward phase from phi(pi_hat) = n pi_hat, both re-measured in the angle
  /// of (y, y' / s) with s^p = max(lambda rho - q, 1) at x_m. Same sign as the raw
  /// difference (which is increasing in lambda) and zero exactly at lambda_n;
  /// unlike terminal_phase it never integrates into a classically forbidden
  /// region in the unstable direction.
  double matching_phase(double lambda, int n, double x_m) const;
  /// Matching point used by eigenvalue(n): midpoint of the cell where the
  /// local frequency lambda rho - q is largest for the starting estimate.
  double matching_point(double lambda) const;

  /// Normalized eigenfunction for an eigenvalue lambda_n of index n.
  EigenPair eigenfunction(double lambda_n, int n) const;

  std::vector<EigenPair> spectrum(int n_max) const;

  /// (y, quasi-derivative) of the normalized eigenfunction at x, integrated from
  /// the nearest sample at or left of x. Accurate to the ODE tolerance, unlike value_at.
  std::array<double, 2> state_at(const EigenPair& pair, double x) const;

  /// Integrals of weight * |y|^p for the normalized eigenfunction of `pair`,
  /// by re-integrating the ODE with one accumulator per weight.
  std::vector<double> moments(const EigenPair& pair, const std::vector<Profile>& weights) const;
  double moment(const EigenPair& pair, const Profile& weight) const;

 private:
  struct Cell {
    double a;
    double b;
    Piece q;
    Piece rho;
  };

  std::vector<Cell> cells_for(const std::vector<Profile>& weights,
                              std::vector<std::vector<Piece>>& weight_pieces) const;

  PExponent p_;
  Profile q_;
  Profile rho_;
  SolverOptions options_;
  PowerSineTable table_;
  std::vector<Cell> cells_;
};

double terminal_phase(const PExponent& p, const Profile& q, const Profile& rho, double lambda);
double eigenvalue(const PExponent& p, const Profile& q, const Profile& rho, int n);
EigenPair eigenfunction(const PExponent& p, const Profile& q, const Profile& rho,
                        double lambda_n, int n);
std::vector<EigenPair> spectrum(const PExponent& p, const Profile& q, const Profile& rho,
                                int n_max);

}  // namespace plap
