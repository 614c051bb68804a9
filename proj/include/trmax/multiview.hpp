#pragma once

#include "trmax/scf.hpp"

#include <vector>

namespace trmax {

/// Labeled multi-view data: v feature matrices sharing m sample columns and
/// a one-hot label matrix Y (c-by-m). Every class must be nonempty so that
/// Sigma = Y Y^T is invertible.
class MultiViewDataset {
 public:
  MultiViewDataset(std::vector<Matrix> views, Matrix labels_onehot);

  /// Convenience constructor from integer labels in [0, classes).
  static MultiViewDataset from_labels(std::vector<Matrix> views,
                                      const std::vector<int>& labels,
                                      int classes);

  Index view_count() const { return static_cast<Index>(views_.size()); }
  Index samples() const { return labels_.cols(); }
  Index classes() const { return labels_.rows(); }
  Index view_dim(Index s) const { return views_[static_cast<size_t>(s)].rows(); }
  const Matrix& view(Index s) const { return views_[static_cast<size_t>(s)]; }
  const Matrix& labels_onehot() const { return labels_; }
  std::vector<int> labels() const;

  /// Column subset (same views, same classes; all classes must stay
  /// nonempty).
  MultiViewDataset subset(const std::vector<Index>& columns) const;

 private:
  std::vector<Matrix> views_;
  Matrix labels_;
};

enum class ModelFamily { Mcca, Gma, Mlda, MvMda };

struct MultiViewModelSpec {
  ModelFamily family;
  double alpha = 1.0;  ///< off-diagonal coupling weight (GMA / MLDA)
  double theta = 0.5;
  Index k = 2;
  double diag_regularization = 1e-8;  ///< added to each B_s diagonal
};

/// Block form of the coupled problem: A is v-by-v blocks with
/// A_{t,s} = A_{s,t}^T, B is block diagonal.
struct BlockProblem {
  std::vector<std::vector<Matrix>> a;  ///< a[s][t], n_s-by-n_t
  std::vector<Matrix> b;               ///< b[s], n_s-by-n_s symmetric
  std::vector<Index> dims;
  double theta = 0.5;
  Index k = 2;

  Index view_count() const { return static_cast<Index>(dims.size()); }
  /// Dense assembled (A, B) — test and diagnostic use.
  std::pair<SymmetricMatrix, SymmetricMatrix> to_dense() const;
};

using Projections = std::vector<StiefelPoint>;

enum class UpdateMode { Jacobi, GaussSeidel };

struct AlternateOptions {
  UpdateMode mode = UpdateMode::GaussSeidel;
  double eps = 1e-6;    ///< relative objective change stopping threshold
  int max_sweeps = 50;
  SolverOptions inner = {.max_iter = 50};
};

struct SweepRecord {
  double objective;                  ///< after the sweep
  std::vector<int> inner_iterations; ///< per view
};

struct AlternateReport {
  Projections projections;
  int sweeps = 0;
  bool converged = false;
  std::vector<SweepRecord> trajectory;
  int bootstrap_sweeps = 0;
};

/// Sample cross-covariance C_{s,t} = (1/m) Z_s H_m Z_t^T.
Matrix cross_covariance(const MultiViewDataset& ds, Index s, Index t);

/// Between-class scatter S_b = Z_s (Y^T Sigma^-1 Y - (1/m) 1 1^T) Z_s^T.
SymmetricMatrix between_class_scatter(const MultiViewDataset& ds, Index s);

/// Within-class scatter S_w = Z_s (I_m - Y^T Sigma^-1 Y) Z_s^T.
SymmetricMatrix within_class_scatter(const MultiViewDataset& ds, Index s);

/// Class-center scatter across views
/// M_{s,t} = Z_s Y^T Sigma^-1 H_c Sigma^-1 Y Z_t^T.
Matrix class_center_scatter(const MultiViewDataset& ds, Index s, Index t);

/// Assemble the blocks for one model family (MCCA / GMA / MLDA / MvMDA),
/// scaling off-diagonal A blocks by alpha for GMA and MLDA and adding
/// diag_regularization to each B_s.
BlockProblem build_block_problem(const MultiViewDataset& ds,
                                 const MultiViewModelSpec& spec);

/// Objective of the coupled problem at a full projection set.
ObjectiveBreakdown block_objective(const BlockProblem& bp,
                                   const Projections& p);

/// The single-view subproblem in view s at the given frozen projections:
///   A_s^ = A_{ss} + (alpha_s/k) I,  B_s^ = B_s + (beta_s/k) I,
///   D_s^ = 2 sum_{s' != s} A_{s,s'} P_{s'},
/// with alpha_s the A-energy of the other views and beta_s their B-energy.
/// `others` supplies the projection used for every view except s (entry s is
/// ignored).
TraceRatioProblem assemble_subproblem(const BlockProblem& bp,
                                      const Projections& others, Index s);

/// Sweep-state variant: Jacobi reads all frozen projections from `prev`;
/// Gauss-Seidel reads views before s from `updated` and views after s from
/// `prev`.
TraceRatioProblem assemble_subproblem(const BlockProblem& bp,
                                      const Projections& prev,
                                      const Projections& updated, Index s,
                                      UpdateMode mode);

/// Default initial guess: first k columns of each view identity.
Projections coordinate_projections(const BlockProblem& bp);

/// Alternating maximization over the views, each subproblem solved by
/// scf_solve warm-started at the view's current projection. Stops when the
/// objective changes by at most eps * |f| over a sweep. For 0 < theta < 1
/// with a negative initial numerator, sweeps at the bootstrap exponent run
/// first until tr(P^T A P) >= 0.
AlternateReport alternate_solve(const BlockProblem& bp, const Projections& init,
                                const AlternateOptions& opts = {});

}  // namespace trmax
