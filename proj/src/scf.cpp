#include "trmax/scf.hpp"

#include <cmath>
#include <string>

namespace trmax {

namespace {

constexpr double kStagnationRel = 1e-16;
constexpr int kStagnationRuns = 20;

void check_options(const SolverOptions& opts) {
  if (!(opts.tol > 0)) {
    throw InvariantError("SolverOptions: tol must be positive");
  }
  if (opts.max_iter < 1) {
    throw InvariantError("SolverOptions: max_iter must be >= 1");
  }
  if (!(opts.rank_tol > 0)) {
    throw InvariantError("SolverOptions: rank_tol must be positive");
  }
  if (opts.bootstrap_theta != 0.0 && opts.bootstrap_theta != 1.0) {
    throw InvariantError("SolverOptions: bootstrap_theta must be 0 or 1");
  }
}

// Keeps products of near-orthonormal factors inside the StiefelPoint
// tolerance; one Newton-Schulz pass squares the defect.
StiefelPoint as_stiefel(Matrix x) {
  const Matrix gram_defect =
      x.transpose() * x - Matrix::Identity(x.cols(), x.cols());
  if (gram_defect.norm() > 1e-13) {
    x -= 0.5 * x * gram_defect;
  }
  return StiefelPoint(std::move(x));
}

struct Step {
  StiefelPoint x;
  double eigen_gap;
  Index rank_xtd;
};

// One SCF update from a prebuilt E(X): dominant eigenbasis, then the polar
// rotation aligning it with D.
Step scf_step(const TraceRatioProblem& p, const SymmetricMatrix& e,
              double rank_tol) {
  SpectrumSlice top = sym_eig_topk(e, p.k());
  if (p.d_is_zero()) {
    return Step{std::move(top.basis), top.gap, 0};
  }
  const Matrix xtd = top.basis.matrix().transpose() * p.d();
  const PolarFactor polar = polar_orthogonal_factor(xtd, rank_tol);
  return Step{as_stiefel(top.basis.matrix() * polar.q), top.gap, polar.rank};
}

}  // namespace

BootstrapResult bootstrap(const TraceRatioProblem& p, const StiefelPoint& x0,
                          const SolverOptions& opts) {
  check_options(opts);
  if (evaluate(p, x0).numerator >= 0) {
    return BootstrapResult{x0, 0};
  }
  StiefelPoint x = x0;
  for (int i = 1; i <= opts.max_iter; ++i) {
    const SymmetricMatrix e =
        detail::build_E_with_theta(p, x, opts.bootstrap_theta);
    x = scf_step(p, e, opts.rank_tol).x;
    if (evaluate(p, x).numerator >= 0) {
      return BootstrapResult{std::move(x), i};
    }
  }
  throw BootstrapError(
      "bootstrap: numerator still negative after " +
      std::to_string(opts.max_iter) +
      " iterations at theta = " + std::to_string(opts.bootstrap_theta) +
      "; the instance may not admit a nonnegative objective");
}

SolveReport scf_solve(const TraceRatioProblem& p, const StiefelPoint& x0,
                      const SolverOptions& opts) {
  check_options(opts);

  StiefelPoint x = x0;
  int boot_iters = 0;
  if (p.theta() > 0.0 && p.theta() < 1.0 && evaluate(p, x0).numerator < 0) {
    BootstrapResult boot = bootstrap(p, x0, opts);
    x = std::move(boot.start);
    boot_iters = boot.iterations;
  }

  SolveReport report{x};
  report.bootstrap_iterations = boot_iters;
  std::vector<double> residuals;

  double f_prev = evaluate(p, x).f_theta;
  SymmetricMatrix e = build_E(p, x);
  int stagnant = 0;
  for (int i = 1; i <= opts.max_iter; ++i) {
    Step step = scf_step(p, e, opts.rank_tol);
    const double step_dist = sin_theta_distance(x, step.x);
    x = std::move(step.x);
    report.iterations = i;

    e = build_E(p, x);
    const double res = nepv_residual(p, x, e, opts.residual_norm_mode);
    const double f = evaluate(p, x).f_theta;
    if (!std::isfinite(f) || !std::isfinite(res)) {
      throw NumericError(
          "scf_solve: non-finite objective or residual at iteration " +
          std::to_string(i));
    }
    residuals.push_back(res);
    if (opts.record_trajectory) {
      report.trajectory.push_back(
          TrajectoryPoint{f, res, step.eigen_gap, step.rank_xtd, step_dist});
    }

    if (res <= opts.tol) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (std::abs(f - f_prev) <= kStagnationRel * std::max(1.0, std::abs(f))) {
      if (++stagnant >= kStagnationRuns) {
        report.status = SolveStatus::Stagnated;
        break;
      }
    } else {
      stagnant = 0;
    }
    f_prev = f;
  }

  report.x = std::move(x);
  report.converged = (report.status == SolveStatus::Converged);
  report.certificate = certify(p, report.x, opts.residual_norm_mode);
  report.estimated_rate = estimate_linear_rate(residuals);
  return report;
}

std::optional<double> estimate_linear_rate(const std::vector<double>& residuals) {
  const size_t m = residuals.size();
  if (m < 6) return std::nullopt;
  const size_t tail = std::min<size_t>(10, m);
  const size_t begin = m - tail;
  double log_sum = 0.0;
  size_t kept = 0;
  for (size_t i = begin; i + 1 < m; ++i) {
    const double a = residuals[i], b = residuals[i + 1];
    if (a > 0 && b > 0 && b < a) {
      log_sum += std::log(b / a);
      ++kept;
    }
  }
  if (kept + 1 < 6) return std::nullopt;
  return std::exp(log_sum / static_cast<double>(kept));
}

std::optional<double> estimate_linear_rate(
    const std::vector<TrajectoryPoint>& trajectory) {
  std::vector<double> residuals;
  residuals.reserve(trajectory.size());
  for (const TrajectoryPoint& pt : trajectory) {
    residuals.push_back(pt.nepv_residual);
  }
  return estimate_linear_rate(residuals);
}

}  // namespace trmax
