#include "trmax/eval.hpp"

#include "trmax/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace trmax {

std::pair<std::vector<Index>, std::vector<Index>> stratified_split(
    const MultiViewDataset& ds, const SplitSpec& spec, int repeat_index) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InvariantError("SplitSpec: train_fraction must be in (0, 1)");
  }
  const std::vector<int> labels = ds.labels();
  const Index c = ds.classes();
  StreamRng rng(spec.seed, static_cast<std::uint64_t>(repeat_index));

  std::vector<Index> train, test;
  for (Index r = 0; r < c; ++r) {
    std::vector<Index> members;
    for (Index j = 0; j < ds.samples(); ++j) {
      if (labels[static_cast<size_t>(j)] == static_cast<int>(r)) {
        members.push_back(j);
      }
    }
    if (members.size() < 2) {
      throw InvariantError("stratified_split: class " + std::to_string(r) +
                           " has fewer than 2 samples");
    }
    for (size_t i = members.size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(rng.below(i + 1));
      std::swap(members[i], members[j]);
    }
    // round(fraction * size), promoted to at least 1 and capped so every
    // class keeps a test sample.
    const auto size = members.size();
    size_t take = static_cast<size_t>(
        std::llround(spec.train_fraction * static_cast<double>(size)));
    take = std::max<size_t>(take, 1);
    take = std::min(take, size - 1);
    for (size_t i = 0; i < size; ++i) {
      (i < take ? train : test).push_back(members[i]);
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

Matrix project_and_fuse(const MultiViewDataset& ds,
                        const Projections& projections,
                        const std::vector<Index>& indices) {
  if (static_cast<Index>(projections.size()) != ds.view_count()) {
    throw DimensionError("project_and_fuse: expected " +
                         std::to_string(ds.view_count()) + " projections");
  }
  const Index k = projections.front().cols();
  const Index cols = static_cast<Index>(indices.size());
  Matrix fused(static_cast<Index>(projections.size()) * k, cols);
  Index row = 0;
  for (Index s = 0; s < ds.view_count(); ++s) {
    const StiefelPoint& p = projections[static_cast<size_t>(s)];
    if (p.rows() != ds.view_dim(s) || p.cols() != k) {
      throw DimensionError("project_and_fuse: projection " +
                           std::to_string(s) + " does not match view");
    }
    Matrix sub(ds.view_dim(s), cols);
    for (Index j = 0; j < cols; ++j) {
      sub.col(j) = ds.view(s).col(indices[static_cast<size_t>(j)]);
    }
    fused.middleRows(row, k) = p.matrix().transpose() * sub;
    row += k;
  }
  return fused;
}

std::vector<int> knn1_classify(const Matrix& train_features,
                               const std::vector<int>& train_labels,
                               const Matrix& test_features) {
  const Index n_train = train_features.cols();
  if (n_train < 1) {
    throw DimensionError("knn1_classify: empty training set");
  }
  if (static_cast<size_t>(n_train) != train_labels.size()) {
    throw DimensionError("knn1_classify: labels do not match features");
  }
  if (test_features.rows() != train_features.rows()) {
    throw DimensionError("knn1_classify: feature dimension mismatch");
  }
  std::vector<int> predicted(static_cast<size_t>(test_features.cols()));
  for (Index j = 0; j < test_features.cols(); ++j) {
    Index best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n_train; ++i) {
      const double dist =
          (train_features.col(i) - test_features.col(j)).squaredNorm();
      if (dist < best_dist) {  // strict: ties keep the smallest index
        best_dist = dist;
        best = i;
      }
    }
    predicted[static_cast<size_t>(j)] = train_labels[static_cast<size_t>(best)];
  }
  return predicted;
}

double accuracy(const std::vector<int>& predicted,
                const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    throw DimensionError("accuracy: size mismatch or empty");
  }
  size_t hits = 0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

AlternateReport fit_on_indices(const MultiViewDataset& ds,
                               const MultiViewModelSpec& model,
                               const std::vector<Index>& indices,
                               const AlternateOptions& opts) {
  const MultiViewDataset train = ds.subset(indices);
  const BlockProblem bp = build_block_problem(train, model);
  return alternate_solve(bp, coordinate_projections(bp), opts);
}

const EvalCell& EvalTable::best_theta(Index k) const {
  const EvalCell* best = nullptr;
  for (const EvalCell& cell : cells) {
    if (cell.k != k) continue;
    if (best == nullptr || cell.result.mean_acc > best->result.mean_acc) {
      best = &cell;
    }
  }
  if (best == nullptr) {
    throw DimensionError("EvalTable: no cells for k = " + std::to_string(k));
  }
  return *best;
}

EvalTable evaluate_model(const MultiViewDataset& ds,
                         const MultiViewModelSpec& model,
                         const SplitSpec& split,
                         const std::vector<Index>& k_grid,
                         const std::vector<double>& theta_grid,
                         const AlternateOptions& opts) {
  if (k_grid.empty() || theta_grid.empty()) {
    throw DimensionError("evaluate_model: empty grid");
  }
  if (split.n_repeats < 1) {
    throw InvariantError("evaluate_model: n_repeats must be >= 1");
  }

  // Splits depend only on (seed, repeat); shared across all grid cells.
  std::vector<std::pair<std::vector<Index>, std::vector<Index>>> splits;
  splits.reserve(static_cast<size_t>(split.n_repeats));
  for (int r = 0; r < split.n_repeats; ++r) {
    splits.push_back(stratified_split(ds, split, r));
  }
  const std::vector<int> all_labels = ds.labels();

  EvalTable table;
  for (Index k : k_grid) {
    for (double theta : theta_grid) {
      MultiViewModelSpec cell_model = model;
      cell_model.k = k;
      cell_model.theta = theta;
      EvalResult result;
      for (const auto& [train_idx, test_idx] : splits) {
        const AlternateReport fit =
            fit_on_indices(ds, cell_model, train_idx, opts);
        const Matrix train_x = project_and_fuse(ds, fit.projections, train_idx);
        const Matrix test_x = project_and_fuse(ds, fit.projections, test_idx);
        std::vector<int> train_y, test_y;
        for (Index j : train_idx) train_y.push_back(all_labels[static_cast<size_t>(j)]);
        for (Index j : test_idx) test_y.push_back(all_labels[static_cast<size_t>(j)]);
        const std::vector<int> predicted =
            knn1_classify(train_x, train_y, test_x);
        result.per_split.push_back(accuracy(predicted, test_y));
      }
      const double n = static_cast<double>(result.per_split.size());
      double mean = 0.0;
      for (double a : result.per_split) mean += a;
      mean /= n;
      double var = 0.0;
      if (result.per_split.size() > 1) {
        for (double a : result.per_split) var += (a - mean) * (a - mean);
        var /= (n - 1.0);
      }
      result.mean_acc = mean;
      result.std_acc = std::sqrt(var);
      table.cells.push_back(EvalCell{k, theta, std::move(result)});
    }
  }
  return table;
}

}  // namespace trmax
