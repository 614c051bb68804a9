#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace trmax {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Shape or index mismatch between arguments.
class DimensionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A domain-type invariant does not hold (asymmetry, loss of orthonormality,
/// indefinite B, theta outside [0,1], ...).
class InvariantError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Non-finite arithmetic or a violated rank assumption detected at runtime.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The bootstrap phase exhausted its iteration budget without reaching a
/// nonnegative numerator; the instance likely violates the nonnegativity
/// assumption on the attainable objective.
class BootstrapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense real symmetric matrix. Storage is exactly symmetric: entry (i,j)
/// compares bit-equal to entry (j,i).
class SymmetricMatrix {
 public:
  enum class Input {
    Strict,      ///< reject input that is not exactly symmetric
    Symmetrize,  ///< replace M by (M + M^T)/2
  };

  explicit SymmetricMatrix(Matrix m, Input mode = Input::Strict);

  Index order() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

/// An n-by-k matrix with orthonormal columns (a point on the Stiefel
/// manifold). Construction rejects matrices with ||X^T X - I||_F above
/// kOrthoTol.
class StiefelPoint {
 public:
  static constexpr double kOrthoTol = 1e-12;

  explicit StiefelPoint(Matrix x);

  /// First k columns of the n-by-n identity.
  static StiefelPoint coordinate_basis(Index n, Index k);

  /// Frobenius norm of X^T X - I for a candidate matrix.
  static double orthonormality_defect(const Matrix& x);

  Index rows() const { return x_.rows(); }
  Index cols() const { return x_.cols(); }
  const Matrix& matrix() const { return x_; }

 private:
  Matrix x_;
};

}  // namespace trmax
