#pragma once

#include "trmax/problem.hpp"

#include <optional>
#include <vector>

namespace trmax {

enum class SolveStatus {
  Converged,      ///< normalized NEPv residual reached tol
  MaxIterations,  ///< iteration budget exhausted
  Stagnated,      ///< objective frozen for 20 iterations without reaching tol
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 1000;
  double rank_tol = 1e-10;  ///< relative threshold for rank(Xhat^T D)
  ResidualNormMode residual_norm_mode = ResidualNormMode::Spectral;
  double bootstrap_theta = 0.0;  ///< 0 or 1; exponent used while bootstrapping
  bool record_trajectory = true;
};

struct TrajectoryPoint {
  double f_theta;
  double nepv_residual;
  double eigen_gap;      ///< gap of the E used to produce this iterate
  Index rank_xtd;        ///< rank(Xhat^T D) at this step (0 when D = 0)
  double step_sintheta;  ///< sin-theta distance from the previous iterate
};

struct SolveReport {
  StiefelPoint x;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<TrajectoryPoint> trajectory;
  Certificate certificate{};
  std::optional<double> estimated_rate;
  int bootstrap_iterations = 0;
};

struct BootstrapResult {
  StiefelPoint start;
  int iterations;
};

/// SCF iteration with polar post-processing. Each iteration builds
/// E_i = E(X_{i-1}), takes an orthonormal basis Xhat of its dominant
/// k-dimensional eigenspace, and sets X_i = Xhat Q with Q the orthogonal
/// polar factor of Xhat^T D (skipped when D = 0). Stops once the normalized
/// NEPv residual falls to opts.tol, the iteration budget runs out, or the
/// objective stagnates. If 0 < theta < 1 and the numerator is negative at
/// X0, a bootstrap phase at exponent opts.bootstrap_theta runs first.
SolveReport scf_solve(const TraceRatioProblem& p, const StiefelPoint& x0,
                      const SolverOptions& opts = {});

/// SCF steps at exponent opts.bootstrap_theta until the numerator
/// tr(X^T A X + X^T D) becomes nonnegative; returns the first qualifying
/// iterate. Returns (x0, 0) if x0 already qualifies. Throws BootstrapError
/// when opts.max_iter steps do not reach nonnegativity.
BootstrapResult bootstrap(const TraceRatioProblem& p, const StiefelPoint& x0,
                          const SolverOptions& opts = {});

/// Geometric mean of successive residual ratios over the last
/// min(10, available) residuals. Requires at least 6 usable points (positive
/// residuals with strictly decreasing consecutive pairs); otherwise empty.
std::optional<double> estimate_linear_rate(const std::vector<double>& residuals);
std::optional<double> estimate_linear_rate(
    const std::vector<TrajectoryPoint>& trajectory);

}  // namespace trmax
