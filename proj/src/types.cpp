#include "trmax/types.hpp"

namespace trmax {

SymmetricMatrix::SymmetricMatrix(Matrix m, Input mode) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionError("SymmetricMatrix: input is " +
                         std::to_string(m_.rows()) + "x" +
                         std::to_string(m_.cols()));
  }
  if (!m_.allFinite()) {
    throw NumericError("SymmetricMatrix: non-finite entries");
  }
  switch (mode) {
    case Input::Strict:
      if (m_ != m_.transpose()) {
        throw InvariantError("SymmetricMatrix: input is not exactly symmetric");
      }
      break;
    case Input::Symmetrize:
      m_ = 0.5 * (m_ + m_.transpose()).eval();
      break;
  }
}

StiefelPoint::StiefelPoint(Matrix x) : x_(std::move(x)) {
  if (x_.rows() < 1 || x_.cols() < 1 || x_.cols() > x_.rows()) {
    throw DimensionError("StiefelPoint: invalid shape " +
                         std::to_string(x_.rows()) + "x" +
                         std::to_string(x_.cols()));
  }
  if (!x_.allFinite()) {
    throw NumericError("StiefelPoint: non-finite entries");
  }
  const double defect = orthonormality_defect(x_);
  if (defect > kOrthoTol) {
    throw InvariantError("StiefelPoint: ||X^T X - I||_F = " +
                         std::to_string(defect));
  }
}

StiefelPoint StiefelPoint::coordinate_basis(Index n, Index k) {
  return StiefelPoint(Matrix::Identity(n, k));
}

double StiefelPoint::orthonormality_defect(const Matrix& x) {
  const Matrix gram = x.transpose() * x;
  return (gram - Matrix::Identity(x.cols(), x.cols())).norm();
}

}  // namespace trmax
