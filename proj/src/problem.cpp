#include "trmax/problem.hpp"

#include <cmath>
#include <string>

namespace trmax {

namespace {

double one_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

void check_point(const TraceRatioProblem& p, const StiefelPoint& x,
                 const char* who) {
  if (x.rows() != p.n() || x.cols() != p.k()) {
    throw DimensionError(std::string(who) + ": X is " +
                         std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", problem is n = " +
                         std::to_string(p.n()) + ", k = " +
                         std::to_string(p.k()));
  }
}

double quadratic_trace(const SymmetricMatrix& m, const Matrix& x) {
  return (m.matrix() * x).cwiseProduct(x).sum();  // tr(X^T M X)
}

double denominator_trace(const TraceRatioProblem& p, const Matrix& x) {
  const double beta = quadratic_trace(p.b(), x);
  if (!(beta > TraceRatioProblem::kDenomGuard)) {
    throw NumericError("tr(X^T B X) = " + std::to_string(beta) +
                       "; rank assumption on B violated");
  }
  return beta;
}

}  // namespace

TraceRatioProblem::TraceRatioProblem(SymmetricMatrix a, SymmetricMatrix b,
                                     Matrix d, double theta)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)), theta_(theta) {
  const Index n = a_.order();
  const Index k = d_.cols();
  if (b_.order() != n || d_.rows() != n) {
    throw DimensionError("TraceRatioProblem: A is " + std::to_string(n) +
                         "x" + std::to_string(n) + ", B is " +
                         std::to_string(b_.order()) + "x" +
                         std::to_string(b_.order()) + ", D is " +
                         std::to_string(d_.rows()) + "x" + std::to_string(k));
  }
  if (k < 1 || k >= n) {
    throw DimensionError("TraceRatioProblem: need 1 <= k < n, got k = " +
                         std::to_string(k) + ", n = " + std::to_string(n));
  }
  if (!(theta_ >= 0.0 && theta_ <= 1.0)) {
    throw InvariantError("TraceRatioProblem: theta = " +
                         std::to_string(theta_) + " outside [0, 1]");
  }
  if (!d_.allFinite()) {
    throw NumericError("TraceRatioProblem: D has non-finite entries");
  }

  const Vector b_eigs = sym_eigenvalues(b_);  // nonincreasing
  const double b_max = b_eigs(0);
  b_min_eig_ = b_eigs(n - 1);
  norm_b2_ = std::max(std::abs(b_max), std::abs(b_min_eig_));
  if (b_min_eig_ < -kPsdTol * norm_b2_) {
    throw InvariantError("TraceRatioProblem: B is not PSD (min eig = " +
                         std::to_string(b_min_eig_) + ")");
  }
  b_rank_ = 0;
  for (Index i = 0; i < n; ++i) {
    if (b_eigs(i) > kRankTol * b_max) ++b_rank_;
  }
  if (b_rank_ <= n - k) {
    throw InvariantError("TraceRatioProblem: rank(B) = " +
                         std::to_string(b_rank_) + " <= n - k = " +
                         std::to_string(n - k) +
                         "; denominator may vanish on the manifold");
  }

  const Vector a_eigs = sym_eigenvalues(a_);
  norm_a2_ = std::max(std::abs(a_eigs(0)), std::abs(a_eigs(n - 1)));
  norm_d2_ = spectral_norm(d_);
  d_is_zero_ = (norm_d2_ == 0.0);
  norm_a1_ = one_norm(a_.matrix());
  norm_b1_ = one_norm(b_.matrix());
  norm_d1_ = one_norm(d_);
}

double TraceRatioProblem::norm_a(ResidualNormMode mode) const {
  return mode == ResidualNormMode::Spectral ? norm_a2_ : norm_a1_;
}
double TraceRatioProblem::norm_b(ResidualNormMode mode) const {
  return mode == ResidualNormMode::Spectral ? norm_b2_ : norm_b1_;
}
double TraceRatioProblem::norm_d(ResidualNormMode mode) const {
  return mode == ResidualNormMode::Spectral ? norm_d2_ : norm_d1_;
}

ObjectiveBreakdown evaluate(const TraceRatioProblem& p, const StiefelPoint& x) {
  check_point(p, x, "evaluate");
  const Matrix& xm = x.matrix();
  const double alpha = quadratic_trace(p.a(), xm);
  const double delta = p.d_is_zero() ? 0.0 : p.d().cwiseProduct(xm).sum();
  const double beta = denominator_trace(p, xm);
  const double scale = std::pow(beta, p.theta());
  ObjectiveBreakdown out;
  out.g_theta = alpha / scale;
  out.h_theta = delta / scale;
  out.numerator = alpha + delta;
  out.denominator = beta;
  out.f_theta = out.numerator / scale;
  return out;
}

namespace detail {

SymmetricMatrix build_E_with_theta(const TraceRatioProblem& p,
                                   const StiefelPoint& x, double theta) {
  check_point(p, x, "build_E");
  const Matrix& xm = x.matrix();
  const double beta = denominator_trace(p, xm);
  const double scale = 2.0 / std::pow(beta, theta);
  Matrix e;
  if (p.d_is_zero()) {
    e = p.a().matrix();
  } else {
    const Matrix dxt = p.d() * xm.transpose();
    e = p.a().matrix() + 0.5 * (dxt + dxt.transpose());
  }
  if (theta != 0.0) {
    const double numerator =
        quadratic_trace(p.a(), xm) +
        (p.d_is_zero() ? 0.0 : p.d().cwiseProduct(xm).sum());
    const double f1 = numerator / beta;
    e -= (theta * f1) * p.b().matrix();
  }
  e *= scale;
  return SymmetricMatrix(std::move(e), SymmetricMatrix::Input::Strict);
}

}  // namespace detail

SymmetricMatrix build_E(const TraceRatioProblem& p, const StiefelPoint& x) {
  return detail::build_E_with_theta(p, x, p.theta());
}

double nepv_residual(const TraceRatioProblem& p, const StiefelPoint& x,
                     const SymmetricMatrix& e_of_x, ResidualNormMode mode) {
  check_point(p, x, "nepv_residual");
  const Matrix& xm = x.matrix();
  const Matrix ex = e_of_x.matrix() * xm;
  const Matrix residual = ex - xm * (xm.transpose() * ex);
  const double beta = denominator_trace(p, xm);

  const double numerator =
      quadratic_trace(p.a(), xm) +
      (p.d_is_zero() ? 0.0 : p.d().cwiseProduct(xm).sum());
  const double f1 = numerator / beta;
  double denom =
      p.norm_a(mode) + p.theta() * std::abs(f1) * p.norm_b(mode) + p.norm_d(mode);
  if (denom <= 0.0) return 0.0;  // A = D = 0 with theta = 0: E is identically 0
  return std::pow(beta, p.theta()) / (2.0 * std::sqrt(double(p.k()))) *
         residual.norm() / denom;
}

double nepv_residual(const TraceRatioProblem& p, const StiefelPoint& x,
                     ResidualNormMode mode) {
  return nepv_residual(p, x, build_E(p, x), mode);
}

Certificate certify(const TraceRatioProblem& p, const StiefelPoint& x,
                    ResidualNormMode mode) {
  check_point(p, x, "certify");
  const SymmetricMatrix e = build_E(p, x);
  Certificate cert;
  cert.nepv_residual = nepv_residual(p, x, e, mode);

  const Matrix xtd = x.matrix().transpose() * p.d();
  cert.xtd_symmetry_defect = (xtd - xtd.transpose()).norm();
  const SymmetricMatrix xtd_sym(0.5 * (xtd + xtd.transpose()),
                                SymmetricMatrix::Input::Strict);
  const Vector xtd_eigs = sym_eigenvalues(xtd_sym);
  cert.xtd_min_eigenvalue = xtd_eigs(xtd_eigs.size() - 1);

  const SpectrumSlice top = sym_eig_topk(e, p.k());
  const double ritz = quadratic_trace(e, x.matrix());
  cert.topk_defect = top.eigenvalues.sum() - ritz;
  cert.eigen_gap = top.gap;
  return cert;
}

LemmaMonoQuantities lemma_mono_quantities(const TraceRatioProblem& p,
                                          const StiefelPoint& x,
                                          const StiefelPoint& x_tilde) {
  check_point(p, x, "lemma_mono_quantities");
  check_point(p, x_tilde, "lemma_mono_quantities");
  LemmaMonoQuantities q;
  q.alpha = quadratic_trace(p.a(), x.matrix());
  q.delta = p.d_is_zero() ? 0.0 : p.d().cwiseProduct(x.matrix()).sum();
  q.beta = denominator_trace(p, x.matrix());
  q.beta_tilde = denominator_trace(p, x_tilde.matrix());
  const double theta = p.theta();
  q.gamma = (q.alpha + q.delta) / (std::pow(q.beta_tilde, theta) * q.beta) *
            ((1.0 - theta) * q.beta + theta * q.beta_tilde -
             std::pow(q.beta, 1.0 - theta) * std::pow(q.beta_tilde, theta));
  return q;
}

}  // namespace trmax
