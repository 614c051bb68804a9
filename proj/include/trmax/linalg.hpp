#pragma once

#include "trmax/types.hpp"

namespace trmax {

/// k largest eigenvalues of a symmetric matrix, an orthonormal eigenbasis,
/// and the gap to the (k+1)-th eigenvalue.
struct SpectrumSlice {
  Vector eigenvalues;  ///< nonincreasing, length k
  StiefelPoint basis;  ///< n-by-k, column j pairs with eigenvalues(j)
  double gap;          ///< lambda_k - lambda_{k+1}, >= 0
};

struct ThinSvd {
  Matrix u;         ///< k-by-k orthogonal
  Vector singulars; ///< nonincreasing, nonnegative
  Matrix v;         ///< k-by-k orthogonal; s = u * diag(singulars) * v^T
};

struct PolarFactor {
  Matrix q;    ///< k-by-k orthogonal, maximizes tr(Q^T S)
  Index rank;  ///< number of singular values above rank_tol * sigma_1
};

/// Partial eigendecomposition for the k largest eigenvalues, 1 <= k < n.
/// Deterministic for fixed input: each eigenvector is sign-fixed so that its
/// first component of largest magnitude is positive, and ties in eigenvalue
/// are ordered by the index of that component.
SpectrumSlice sym_eig_topk(const SymmetricMatrix& m, Index k);

/// All eigenvalues, nonincreasing.
Vector sym_eigenvalues(const SymmetricMatrix& m);

/// Full eigendecomposition, eigenvalues nonincreasing with matching columns.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};
EigenPairs sym_eig_full(const SymmetricMatrix& m);

/// Full SVD of a square matrix.
ThinSvd thin_svd(const Matrix& s);

/// Orthogonal factor of the polar decomposition, with the residual rotation
/// freedom on the null space fixed to the identity: Q = U V^T from the SVD
/// S = U Sigma V^T. For S = 0 returns Q = I and rank 0. Q^T S is symmetric
/// positive semi-definite and tr(Q^T S) equals the trace norm of S.
PolarFactor polar_orthogonal_factor(const Matrix& s, double rank_tol = 1e-10);

/// Sum of singular values (nuclear norm).
double trace_norm(const Matrix& s);

/// Largest singular value.
double spectral_norm(const Matrix& s);

/// Largest sine of the canonical angles between the column spaces of X and
/// Y: sqrt(1 - sigma_min(X^T Y)^2), in [0, 1]. A metric on the Grassmann
/// manifold; invariant under right-rotation of either argument.
double sin_theta_distance(const StiefelPoint& x, const StiefelPoint& y);

}  // namespace trmax
