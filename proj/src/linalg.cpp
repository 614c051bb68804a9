#include "trmax/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

// Symmetric eigensolvers from the BLAS/LAPACK backend; everything else runs
// on Eigen.
extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a,
             const int* lda, double* w, double* work, const int* lwork,
             int* iwork, const int* liwork, int* info);
void dsyevr_(const char* jobz, const char* range, const char* uplo,
             const int* n, double* a, const int* lda, const double* vl,
             const double* vu, const int* il, const int* iu,
             const double* abstol, int* m, double* w, double* z,
             const int* ldz, int* isuppz, double* work, const int* lwork,
             int* iwork, const int* liwork, int* info);
}

namespace trmax {

namespace {

// Index of the first component of largest magnitude; used to fix eigenvector
// signs and to break exact eigenvalue ties deterministically.
Index anchor_index(const Eigen::Ref<const Vector>& v) {
  Index best = 0;
  double mag = std::abs(v(0));
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > mag) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  return best;
}

}  // namespace

Vector sym_eigenvalues(const SymmetricMatrix& m) {
  const int n = static_cast<int>(m.order());
  Matrix a = m.matrix();
  Vector w(n);
  int info = 0;
  int lwork = -1, liwork = -1, iwork_query = 0;
  double work_query = 0;
  dsyevd_("N", "L", &n, a.data(), &n, w.data(), &work_query, &lwork,
          &iwork_query, &liwork, &info);
  lwork = static_cast<int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<size_t>(lwork));
  std::vector<int> iwork(static_cast<size_t>(liwork));
  dsyevd_("N", "L", &n, a.data(), &n, w.data(), work.data(), &lwork,
          iwork.data(), &liwork, &info);
  if (info != 0) {
    throw NumericError("dsyevd failed, info = " + std::to_string(info));
  }
  return w.reverse();
}

EigenPairs sym_eig_full(const SymmetricMatrix& m) {
  const int n = static_cast<int>(m.order());
  Matrix a = m.matrix();
  Vector w(n);
  int info = 0;
  int lwork = -1, liwork = -1, iwork_query = 0;
  double work_query = 0;
  dsyevd_("V", "L", &n, a.data(), &n, w.data(), &work_query, &lwork,
          &iwork_query, &liwork, &info);
  lwork = static_cast<int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<size_t>(lwork));
  std::vector<int> iwork(static_cast<size_t>(liwork));
  dsyevd_("V", "L", &n, a.data(), &n, w.data(), work.data(), &lwork,
          iwork.data(), &liwork, &info);
  if (info != 0) {
    throw NumericError("dsyevd failed, info = " + std::to_string(info));
  }
  Vector values(n);
  Matrix vectors(n, n);
  for (int j = 0; j < n; ++j) {
    values(j) = w(n - 1 - j);
    vectors.col(j) = a.col(n - 1 - j);
  }
  return EigenPairs{std::move(values), std::move(vectors)};
}

SpectrumSlice sym_eig_topk(const SymmetricMatrix& m, Index k) {
  const Index n = m.order();
  if (k < 1 || k >= n) {
    throw DimensionError("sym_eig_topk: need 1 <= k < n, got k = " +
                         std::to_string(k) + ", n = " + std::to_string(n));
  }
  const int ni = static_cast<int>(n);
  const int want = static_cast<int>(k) + 1;  // k pairs plus lambda_{k+1}
  Matrix a = m.matrix();
  Vector w(ni);
  Matrix z(ni, want);
  std::vector<int> isuppz(2 * static_cast<size_t>(want));
  const int il = ni - want + 1, iu = ni;
  int found = 0, info = 0;
  const double vl = 0, vu = 0, abstol = 0;
  int lwork = -1, liwork = -1, iwork_query = 0;
  double work_query = 0;
  dsyevr_("V", "I", "L", &ni, a.data(), &ni, &vl, &vu, &il, &iu, &abstol,
          &found, w.data(), z.data(), &ni, isuppz.data(), &work_query, &lwork,
          &iwork_query, &liwork, &info);
  lwork = static_cast<int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<size_t>(lwork));
  std::vector<int> iwork(static_cast<size_t>(liwork));
  dsyevr_("V", "I", "L", &ni, a.data(), &ni, &vl, &vu, &il, &iu, &abstol,
          &found, w.data(), z.data(), &ni, isuppz.data(), work.data(), &lwork,
          iwork.data(), &liwork, &info);
  if (info != 0 || found != want) {
    throw NumericError("dsyevr failed, info = " + std::to_string(info));
  }

  // Returned ascending: w(0) = lambda_{k+1}, w(1..k) = the top k. Sign-fix
  // each kept vector, then order by eigenvalue descending with exact ties
  // broken by anchor index.
  struct Pair {
    double value;
    Index column;  // in z
    Index anchor;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<size_t>(k));
  for (Index j = 1; j <= k; ++j) {
    const Index an = anchor_index(z.col(j));
    if (z(an, j) < 0) z.col(j) = -z.col(j);
    pairs.push_back({w(j), j, an});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.anchor < b.anchor;
  });

  Vector values(k);
  Matrix basis(n, k);
  for (Index j = 0; j < k; ++j) {
    values(j) = pairs[static_cast<size_t>(j)].value;
    basis.col(j) = z.col(pairs[static_cast<size_t>(j)].column);
  }
  const double gap = std::max(0.0, values(k - 1) - w(0));
  return SpectrumSlice{std::move(values), StiefelPoint(std::move(basis)), gap};
}

ThinSvd thin_svd(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw DimensionError("thin_svd: input must be square");
  }
  if (!s.allFinite()) {
    throw NumericError("thin_svd: non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return ThinSvd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

PolarFactor polar_orthogonal_factor(const Matrix& s, double rank_tol) {
  if (rank_tol <= 0) {
    throw InvariantError("polar_orthogonal_factor: rank_tol must be positive");
  }
  const Index k = s.rows();
  const ThinSvd svd = thin_svd(s);
  const double sigma1 = k > 0 ? svd.singulars(0) : 0.0;
  if (sigma1 <= 0.0) {
    return PolarFactor{Matrix::Identity(k, k), 0};
  }
  Index rank = 0;
  for (Index i = 0; i < k; ++i) {
    if (svd.singulars(i) > rank_tol * sigma1) ++rank;
  }
  // W = I on the null-space block collapses Q to U V^T for every rank.
  return PolarFactor{svd.u * svd.v.transpose(), rank};
}

double trace_norm(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  if (!s.allFinite()) {
    throw NumericError("trace_norm: non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(s);
  return svd.singularValues().sum();
}

double spectral_norm(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  if (!s.allFinite()) {
    throw NumericError("spectral_norm: non-finite entries");
  }
  Eigen::JacobiSVD<Matrix> svd(s);
  return svd.singularValues()(0);
}

double sin_theta_distance(const StiefelPoint& x, const StiefelPoint& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("sin_theta_distance: shape mismatch");
  }
  // ||(I - X X^T) Y||_2 equals sqrt(1 - sigma_min(X^T Y)^2) but keeps full
  // accuracy for nearly equal subspaces.
  const Matrix residual =
      y.matrix() - x.matrix() * (x.matrix().transpose() * y.matrix());
  Eigen::JacobiSVD<Matrix> svd(residual);
  return std::min(1.0, svd.singularValues()(0));
}

}  // namespace trmax
