#pragma once

#include "trmax/multiview.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace trmax {

struct SplitSpec {
  double train_fraction = 0.10;
  int n_repeats = 10;
  std::uint64_t seed = 0;
};

struct EvalResult {
  double mean_acc = 0.0;
  double std_acc = 0.0;  ///< sample std over splits; 0 for a single split
  std::vector<double> per_split;
};

struct EvalCell {
  Index k;
  double theta;
  EvalResult result;
};

struct EvalTable {
  std::vector<EvalCell> cells;  ///< ordered by (k, theta)
  /// Cell with the highest mean accuracy for the given k (smallest theta on
  /// ties).
  const EvalCell& best_theta(Index k) const;
};

/// Stratified train/test split: per class, a seeded shuffle assigns
/// round(train_fraction * class size) samples (at least 1, at most size - 1)
/// to the training set. Index lists are sorted ascending. Deterministic per
/// (spec.seed, repeat_index).
std::pair<std::vector<Index>, std::vector<Index>> stratified_split(
    const MultiViewDataset& ds, const SplitSpec& spec, int repeat_index);

/// Concatenates the projected views, P_s^T Z_s restricted to the given
/// columns, into a (v k)-by-|indices| feature block.
Matrix project_and_fuse(const MultiViewDataset& ds,
                        const Projections& projections,
                        const std::vector<Index>& indices);

/// 1-nearest-neighbor with Euclidean distance; equidistant neighbors resolve
/// to the smallest training index.
std::vector<int> knn1_classify(const Matrix& train_features,
                               const std::vector<int>& train_labels,
                               const Matrix& test_features);

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth);

/// Full protocol for one (k, theta) grid: for each repeat, fit projections
/// on the training slice only with alternate_solve, fuse, classify with
/// 1-NN, and aggregate accuracy over repeats.
EvalTable evaluate_model(const MultiViewDataset& ds,
                         const MultiViewModelSpec& model,
                         const SplitSpec& split,
                         const std::vector<Index>& k_grid,
                         const std::vector<double>& theta_grid,
                         const AlternateOptions& opts = {});

/// Fit projections for one model on a sample subset (the training slice of
/// evaluate_model); exposed so leakage can be checked externally.
AlternateReport fit_on_indices(const MultiViewDataset& ds,
                               const MultiViewModelSpec& model,
                               const std::vector<Index>& indices,
                               const AlternateOptions& opts = {});

}  // namespace trmax
