#pragma once

#include "trmax/linalg.hpp"
#include "trmax/types.hpp"

namespace trmax {

/// Norm family used in the denominator of the normalized NEPv residual.
enum class ResidualNormMode { Spectral, OneNorm };

/// The trace ratio maximization instance
///
///   max f_theta(X) = tr(X^T A X + X^T D) / [tr(X^T B X)]^theta
///
/// over n-by-k X with orthonormal columns, where A and B are symmetric, B is
/// positive semi-definite with rank(B) > n - k (so the denominator is
/// positive on the whole manifold), D is n-by-k, and 0 <= theta <= 1.
/// Immutable after construction; construction validates the assumptions and
/// caches the matrix norms used by the residual.
class TraceRatioProblem {
 public:
  static constexpr double kPsdTol = 1e-10;       // relative to ||B||_2
  static constexpr double kRankTol = 1e-10;      // relative to lambda_max(B)
  static constexpr double kDenomGuard = 1e-14;   // tr(X^T B X) floor

  TraceRatioProblem(SymmetricMatrix a, SymmetricMatrix b, Matrix d,
                    double theta);

  Index n() const { return a_.order(); }
  Index k() const { return d_.cols(); }
  double theta() const { return theta_; }
  const SymmetricMatrix& a() const { return a_; }
  const SymmetricMatrix& b() const { return b_; }
  const Matrix& d() const { return d_; }

  bool d_is_zero() const { return d_is_zero_; }
  double norm_a(ResidualNormMode mode) const;
  double norm_b(ResidualNormMode mode) const;
  double norm_d(ResidualNormMode mode) const;
  double b_min_eigenvalue() const { return b_min_eig_; }
  Index b_rank() const { return b_rank_; }

 private:
  SymmetricMatrix a_;
  SymmetricMatrix b_;
  Matrix d_;
  double theta_;
  bool d_is_zero_;
  double b_min_eig_;
  Index b_rank_;
  double norm_a2_, norm_b2_, norm_d2_;
  double norm_a1_, norm_b1_, norm_d1_;
};

/// f_theta split into its quadratic and linear parts.
struct ObjectiveBreakdown {
  double g_theta;      ///< tr(X^T A X) / denom^theta
  double h_theta;      ///< tr(X^T D) / denom^theta
  double f_theta;      ///< (numerator) / denom^theta
  double numerator;    ///< tr(X^T A X + X^T D)
  double denominator;  ///< tr(X^T B X), > 0
};

/// Scalars of the monotonicity estimate: for iterates X, X~ with
/// tr(X~^T E(X) X~) >= tr(X^T E(X) X),
///
///   f_theta(X) + gamma <= g_theta(X~) + tr(X~^T D X^T X~) / beta~^theta
///
/// where gamma = ((alpha+delta)/(beta~^theta beta)) *
///               [(1-theta) beta + theta beta~ - beta^{1-theta} beta~^theta].
struct LemmaMonoQuantities {
  double alpha;       ///< tr(X^T A X)
  double delta;       ///< tr(X^T D)
  double beta;        ///< tr(X^T B X)
  double beta_tilde;  ///< tr(X~^T B X~)
  double gamma;
};

/// First-order criticality diagnostics at a point.
struct Certificate {
  double nepv_residual;        ///< normalized NEPv residual
  double xtd_symmetry_defect;  ///< ||X^T D - D^T X||_F
  double xtd_min_eigenvalue;   ///< min eig of sym(X^T D)
  double topk_defect;          ///< sum of k largest eig(E) - tr(X^T E X)
  double eigen_gap;            ///< lambda_k(E) - lambda_{k+1}(E)
};

ObjectiveBreakdown evaluate(const TraceRatioProblem& p, const StiefelPoint& x);

/// The NEPv coefficient matrix
///   E(X) = (2 / denom^theta) [A + (D X^T + X D^T)/2 - theta f_1(X) B],
/// where f_1 is the theta = 1 ratio regardless of the problem's theta.
SymmetricMatrix build_E(const TraceRatioProblem& p, const StiefelPoint& x);

/// Normalized residual of the NEPv E(X) X = X Lambda:
///   denom^theta / (2 sqrt(k)) * ||E X - X (X^T E X)||_F
///     / (||A|| + theta |f_1(X)| ||B|| + ||D||).
double nepv_residual(const TraceRatioProblem& p, const StiefelPoint& x,
                     ResidualNormMode mode = ResidualNormMode::Spectral);

/// Variant reusing an already-built E(X).
double nepv_residual(const TraceRatioProblem& p, const StiefelPoint& x,
                     const SymmetricMatrix& e_of_x,
                     ResidualNormMode mode = ResidualNormMode::Spectral);

Certificate certify(const TraceRatioProblem& p, const StiefelPoint& x,
                    ResidualNormMode mode = ResidualNormMode::Spectral);

LemmaMonoQuantities lemma_mono_quantities(const TraceRatioProblem& p,
                                          const StiefelPoint& x,
                                          const StiefelPoint& x_tilde);

namespace detail {
/// E with an overriding exponent; build_E(p, x) equals
/// build_E_with_theta(p, x, p.theta()).
SymmetricMatrix build_E_with_theta(const TraceRatioProblem& p,
                                   const StiefelPoint& x, double theta);
}  // namespace detail

}  // namespace trmax
