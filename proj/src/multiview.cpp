#include "trmax/multiview.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace trmax {

namespace {

void check_view(const MultiViewDataset& ds, Index s, const char* who) {
  if (s < 0 || s >= ds.view_count()) {
    throw DimensionError(std::string(who) + ": view index " +
                         std::to_string(s) + " out of range");
  }
}

// Class sums G = Z_s Y^T (column c sums the samples of class c) and the
// class sizes; the scatter formulas below are contractions of these.
Matrix class_sums(const MultiViewDataset& ds, Index s) {
  return ds.view(s) * ds.labels_onehot().transpose();
}

Vector class_counts(const MultiViewDataset& ds) {
  return ds.labels_onehot().rowwise().sum();
}

Matrix centered(const Matrix& z) {
  return z.colwise() - z.rowwise().mean().eval();
}

}  // namespace

MultiViewDataset::MultiViewDataset(std::vector<Matrix> views,
                                   Matrix labels_onehot)
    : views_(std::move(views)), labels_(std::move(labels_onehot)) {
  if (views_.empty()) {
    throw DimensionError("MultiViewDataset: no views");
  }
  const Index m = labels_.cols();
  const Index c = labels_.rows();
  if (m < 1 || c < 1) {
    throw DimensionError("MultiViewDataset: empty label matrix");
  }
  for (size_t s = 0; s < views_.size(); ++s) {
    if (views_[s].cols() != m) {
      throw DimensionError("MultiViewDataset: view " + std::to_string(s) +
                           " has " + std::to_string(views_[s].cols()) +
                           " columns, labels have " + std::to_string(m));
    }
    if (!views_[s].allFinite()) {
      throw NumericError("MultiViewDataset: view " + std::to_string(s) +
                         " has non-finite entries");
    }
  }
  for (Index j = 0; j < m; ++j) {
    Index ones = 0;
    for (Index r = 0; r < c; ++r) {
      const double y = labels_(r, j);
      if (y == 1.0) {
        ++ones;
      } else if (y != 0.0) {
        throw InvariantError("MultiViewDataset: label column " +
                             std::to_string(j) + " is not one-hot");
      }
    }
    if (ones != 1) {
      throw InvariantError("MultiViewDataset: label column " +
                           std::to_string(j) + " is not one-hot");
    }
  }
  const Vector counts = labels_.rowwise().sum();
  for (Index r = 0; r < c; ++r) {
    if (counts(r) < 1.0) {
      throw InvariantError("MultiViewDataset: class " + std::to_string(r) +
                           " is empty");
    }
  }
}

MultiViewDataset MultiViewDataset::from_labels(std::vector<Matrix> views,
                                               const std::vector<int>& labels,
                                               int classes) {
  const Index m = static_cast<Index>(labels.size());
  Matrix y = Matrix::Zero(classes, m);
  for (Index j = 0; j < m; ++j) {
    const int r = labels[static_cast<size_t>(j)];
    if (r < 0 || r >= classes) {
      throw InvariantError("MultiViewDataset: label " + std::to_string(r) +
                           " outside [0, " + std::to_string(classes) + ")");
    }
    y(r, j) = 1.0;
  }
  return MultiViewDataset(std::move(views), std::move(y));
}

std::vector<int> MultiViewDataset::labels() const {
  std::vector<int> out(static_cast<size_t>(samples()));
  for (Index j = 0; j < samples(); ++j) {
    Index r = 0;
    labels_.col(j).maxCoeff(&r);
    out[static_cast<size_t>(j)] = static_cast<int>(r);
  }
  return out;
}

MultiViewDataset MultiViewDataset::subset(
    const std::vector<Index>& columns) const {
  const Index m = static_cast<Index>(columns.size());
  std::vector<Matrix> views;
  views.reserve(views_.size());
  for (const Matrix& z : views_) {
    Matrix sub(z.rows(), m);
    for (Index j = 0; j < m; ++j) {
      const Index col = columns[static_cast<size_t>(j)];
      if (col < 0 || col >= z.cols()) {
        throw DimensionError("subset: column " + std::to_string(col) +
                             " out of range");
      }
      sub.col(j) = z.col(col);
    }
    views.push_back(std::move(sub));
  }
  Matrix y(labels_.rows(), m);
  for (Index j = 0; j < m; ++j) {
    y.col(j) = labels_.col(columns[static_cast<size_t>(j)]);
  }
  return MultiViewDataset(std::move(views), std::move(y));
}

Matrix cross_covariance(const MultiViewDataset& ds, Index s, Index t) {
  check_view(ds, s, "cross_covariance");
  check_view(ds, t, "cross_covariance");
  const double m = static_cast<double>(ds.samples());
  return centered(ds.view(s)) * centered(ds.view(t)).transpose() / m;
}

SymmetricMatrix between_class_scatter(const MultiViewDataset& ds, Index s) {
  check_view(ds, s, "between_class_scatter");
  const Matrix g = class_sums(ds, s);
  const Vector counts = class_counts(ds);
  const double m = static_cast<double>(ds.samples());
  const Vector total = ds.view(s).rowwise().sum();
  Matrix sb = g * counts.cwiseInverse().asDiagonal() * g.transpose() -
              total * total.transpose() / m;
  return SymmetricMatrix(std::move(sb), SymmetricMatrix::Input::Symmetrize);
}

SymmetricMatrix within_class_scatter(const MultiViewDataset& ds, Index s) {
  check_view(ds, s, "within_class_scatter");
  const Matrix& z = ds.view(s);
  const Matrix g = class_sums(ds, s);
  const Vector counts = class_counts(ds);
  Matrix sw = z * z.transpose() -
              g * counts.cwiseInverse().asDiagonal() * g.transpose();
  return SymmetricMatrix(std::move(sw), SymmetricMatrix::Input::Symmetrize);
}

Matrix class_center_scatter(const MultiViewDataset& ds, Index s, Index t) {
  check_view(ds, s, "class_center_scatter");
  check_view(ds, t, "class_center_scatter");
  const Vector counts = class_counts(ds);
  // Columns of K are the class means; H_c centers them across classes.
  const Matrix ks = class_sums(ds, s) * counts.cwiseInverse().asDiagonal();
  const Matrix kt = class_sums(ds, t) * counts.cwiseInverse().asDiagonal();
  return centered(ks) * centered(kt).transpose();
}

BlockProblem build_block_problem(const MultiViewDataset& ds,
                                 const MultiViewModelSpec& spec) {
  const Index v = ds.view_count();
  if (spec.k < 1) {
    throw DimensionError("build_block_problem: k must be >= 1");
  }
  for (Index s = 0; s < v; ++s) {
    if (spec.k > ds.view_dim(s)) {
      throw DimensionError("build_block_problem: k = " +
                           std::to_string(spec.k) + " exceeds view " +
                           std::to_string(s) + " dimension " +
                           std::to_string(ds.view_dim(s)));
    }
  }
  if (spec.alpha < 0) {
    throw InvariantError("build_block_problem: alpha must be >= 0");
  }

  BlockProblem bp;
  bp.theta = spec.theta;
  bp.k = spec.k;
  bp.dims.resize(static_cast<size_t>(v));
  for (Index s = 0; s < v; ++s) {
    bp.dims[static_cast<size_t>(s)] = ds.view_dim(s);
  }
  bp.a.assign(static_cast<size_t>(v), std::vector<Matrix>(static_cast<size_t>(v)));
  bp.b.resize(static_cast<size_t>(v));

  for (Index s = 0; s < v; ++s) {
    for (Index t = s; t < v; ++t) {
      Matrix block;
      if (s == t) {
        switch (spec.family) {
          case ModelFamily::Mcca:
            block = SymmetricMatrix(cross_covariance(ds, s, s),
                                    SymmetricMatrix::Input::Symmetrize)
                        .matrix();
            break;
          case ModelFamily::Gma:
          case ModelFamily::Mlda:
            block = between_class_scatter(ds, s).matrix();
            break;
          case ModelFamily::MvMda:
            block = SymmetricMatrix(class_center_scatter(ds, s, s),
                                    SymmetricMatrix::Input::Symmetrize)
                        .matrix();
            break;
        }
      } else {
        switch (spec.family) {
          case ModelFamily::Mcca:
            block = cross_covariance(ds, s, t);
            break;
          case ModelFamily::Gma:
          case ModelFamily::Mlda:
            block = spec.alpha * cross_covariance(ds, s, t);
            break;
          case ModelFamily::MvMda:
            block = class_center_scatter(ds, s, t);
            break;
        }
      }
      bp.a[static_cast<size_t>(s)][static_cast<size_t>(t)] = block;
      if (s != t) {
        bp.a[static_cast<size_t>(t)][static_cast<size_t>(s)] =
            block.transpose();
      }
    }
    SymmetricMatrix bs =
        (spec.family == ModelFamily::Mcca || spec.family == ModelFamily::Mlda)
            ? SymmetricMatrix(cross_covariance(ds, s, s),
                              SymmetricMatrix::Input::Symmetrize)
            : within_class_scatter(ds, s);
    Matrix reg = bs.matrix();
    reg.diagonal().array() += spec.diag_regularization;
    bp.b[static_cast<size_t>(s)] = std::move(reg);
  }
  return bp;
}

std::pair<SymmetricMatrix, SymmetricMatrix> BlockProblem::to_dense() const {
  Index n = 0;
  for (Index d : dims) n += d;
  Matrix a_dense = Matrix::Zero(n, n);
  Matrix b_dense = Matrix::Zero(n, n);
  Index row = 0;
  for (size_t s = 0; s < dims.size(); ++s) {
    Index col = 0;
    for (size_t t = 0; t < dims.size(); ++t) {
      a_dense.block(row, col, dims[s], dims[t]) = a[s][t];
      col += dims[t];
    }
    b_dense.block(row, row, dims[s], dims[s]) = b[s];
    row += dims[s];
  }
  return {SymmetricMatrix(std::move(a_dense), SymmetricMatrix::Input::Symmetrize),
          SymmetricMatrix(std::move(b_dense), SymmetricMatrix::Input::Symmetrize)};
}

namespace {

void check_projections(const BlockProblem& bp, const Projections& p,
                       const char* who) {
  if (static_cast<Index>(p.size()) != bp.view_count()) {
    throw DimensionError(std::string(who) + ": expected " +
                         std::to_string(bp.view_count()) + " projections");
  }
  for (size_t s = 0; s < p.size(); ++s) {
    if (p[s].rows() != bp.dims[s] || p[s].cols() != bp.k) {
      throw DimensionError(std::string(who) + ": projection " +
                           std::to_string(s) + " is " +
                           std::to_string(p[s].rows()) + "x" +
                           std::to_string(p[s].cols()));
    }
  }
}

double block_quadratic(const std::vector<std::vector<Matrix>>& blocks,
                       const Projections& p) {
  double sum = 0.0;
  for (size_t s = 0; s < p.size(); ++s) {
    for (size_t t = 0; t < p.size(); ++t) {
      sum += (blocks[s][t] * p[t].matrix())
                 .cwiseProduct(p[s].matrix())
                 .sum();
    }
  }
  return sum;
}

double diag_quadratic(const std::vector<Matrix>& blocks, const Projections& p) {
  double sum = 0.0;
  for (size_t s = 0; s < p.size(); ++s) {
    sum += (blocks[s] * p[s].matrix()).cwiseProduct(p[s].matrix()).sum();
  }
  return sum;
}

}  // namespace

ObjectiveBreakdown block_objective(const BlockProblem& bp,
                                   const Projections& p) {
  check_projections(bp, p, "block_objective");
  const double num = block_quadratic(bp.a, p);
  const double den = diag_quadratic(bp.b, p);
  if (!(den > TraceRatioProblem::kDenomGuard)) {
    throw NumericError("block_objective: tr(P^T B P) = " +
                       std::to_string(den));
  }
  const double scale = std::pow(den, bp.theta);
  return ObjectiveBreakdown{num / scale, 0.0, num / scale, num, den};
}

TraceRatioProblem assemble_subproblem(const BlockProblem& bp,
                                      const Projections& others, Index s) {
  check_projections(bp, others, "assemble_subproblem");
  const size_t si = static_cast<size_t>(s);
  const Index v = bp.view_count();
  if (s < 0 || s >= v) {
    throw DimensionError("assemble_subproblem: view index out of range");
  }
  const double k = static_cast<double>(bp.k);

  double alpha_s = 0.0;
  for (size_t sp = 0; sp < others.size(); ++sp) {
    if (sp == si) continue;
    for (size_t tp = 0; tp < others.size(); ++tp) {
      if (tp == si) continue;
      alpha_s += (bp.a[sp][tp] * others[tp].matrix())
                     .cwiseProduct(others[sp].matrix())
                     .sum();
    }
  }
  double beta_s = 0.0;
  for (size_t sp = 0; sp < others.size(); ++sp) {
    if (sp == si) continue;
    beta_s += (bp.b[sp] * others[sp].matrix())
                  .cwiseProduct(others[sp].matrix())
                  .sum();
  }

  Matrix a_hat = bp.a[si][si];
  a_hat.diagonal().array() += alpha_s / k;
  Matrix b_hat = bp.b[si];
  b_hat.diagonal().array() += beta_s / k;
  Matrix d_hat = Matrix::Zero(bp.dims[si], bp.k);
  for (size_t sp = 0; sp < others.size(); ++sp) {
    if (sp == si) continue;
    d_hat += 2.0 * (bp.a[si][sp] * others[sp].matrix());
  }
  return TraceRatioProblem(
      SymmetricMatrix(std::move(a_hat), SymmetricMatrix::Input::Symmetrize),
      SymmetricMatrix(std::move(b_hat), SymmetricMatrix::Input::Symmetrize),
      std::move(d_hat), bp.theta);
}

TraceRatioProblem assemble_subproblem(const BlockProblem& bp,
                                      const Projections& prev,
                                      const Projections& updated, Index s,
                                      UpdateMode mode) {
  if (mode == UpdateMode::Jacobi) {
    return assemble_subproblem(bp, prev, s);
  }
  check_projections(bp, prev, "assemble_subproblem");
  check_projections(bp, updated, "assemble_subproblem");
  Projections mixed;
  mixed.reserve(prev.size());
  for (size_t sp = 0; sp < prev.size(); ++sp) {
    mixed.push_back(sp < static_cast<size_t>(s) ? updated[sp] : prev[sp]);
  }
  return assemble_subproblem(bp, mixed, s);
}

Projections coordinate_projections(const BlockProblem& bp) {
  Projections p;
  p.reserve(bp.dims.size());
  for (Index d : bp.dims) {
    p.push_back(StiefelPoint::coordinate_basis(d, bp.k));
  }
  return p;
}

namespace {

// One alternating sweep at the block problem's own theta; returns the
// updated projections and the per-view inner iteration counts.
std::pair<Projections, std::vector<int>> one_sweep(const BlockProblem& bp,
                                                   const Projections& prev,
                                                   const AlternateOptions& opts) {
  Projections updated = prev;
  std::vector<int> inner;
  inner.reserve(prev.size());
  if (opts.mode == UpdateMode::Jacobi) {
    Projections next;
    next.reserve(prev.size());
    for (Index s = 0; s < bp.view_count(); ++s) {
      const TraceRatioProblem sub = assemble_subproblem(bp, prev, s);
      SolveReport rep = scf_solve(sub, prev[static_cast<size_t>(s)], opts.inner);
      inner.push_back(rep.iterations);
      next.push_back(std::move(rep.x));
    }
    return {std::move(next), std::move(inner)};
  }
  for (Index s = 0; s < bp.view_count(); ++s) {
    const TraceRatioProblem sub =
        assemble_subproblem(bp, prev, updated, s, UpdateMode::GaussSeidel);
    SolveReport rep = scf_solve(sub, prev[static_cast<size_t>(s)], opts.inner);
    inner.push_back(rep.iterations);
    updated[static_cast<size_t>(s)] = std::move(rep.x);
  }
  return {std::move(updated), std::move(inner)};
}

}  // namespace

AlternateReport alternate_solve(const BlockProblem& bp, const Projections& init,
                                const AlternateOptions& opts) {
  check_projections(bp, init, "alternate_solve");
  if (!(opts.eps > 0) || opts.max_sweeps < 1) {
    throw InvariantError("AlternateOptions: eps must be positive and "
                         "max_sweeps >= 1");
  }

  AlternateReport report;
  report.projections = init;

  if (bp.theta > 0.0 && bp.theta < 1.0 &&
      block_objective(bp, report.projections).numerator < 0) {
    BlockProblem boot = bp;
    boot.theta = opts.inner.bootstrap_theta;
    AlternateOptions boot_opts = opts;
    bool ok = false;
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
      report.projections =
          one_sweep(boot, report.projections, boot_opts).first;
      report.bootstrap_sweeps = sweep;
      if (block_objective(bp, report.projections).numerator >= 0) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw BootstrapError(
          "alternate_solve: tr(P^T A P) still negative after " +
          std::to_string(opts.max_sweeps) + " bootstrap sweeps");
    }
  }

  double f = block_objective(bp, report.projections).f_theta;
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    auto [next, inner] = one_sweep(bp, report.projections, opts);
    report.projections = std::move(next);
    report.sweeps = sweep;
    const double f_new = block_objective(bp, report.projections).f_theta;
    report.trajectory.push_back(SweepRecord{f_new, std::move(inner)});
    if (std::abs(f_new - f) <= opts.eps * std::abs(f_new)) {
      report.converged = true;
      break;
    }
    f = f_new;
  }
  return report;
}

}  // namespace trmax
