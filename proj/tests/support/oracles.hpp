// Independent reference computations for the test suites. Nothing here may
// call into the library's eigensolver or SVD paths: the eigensolver is a
// plain cyclic Jacobi sweep, singular values come from it via S^T S, and the
// objective/E-matrix oracles are written with scalar loops.
#pragma once

#include "trmax/rng.hpp"
#include "trmax/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oracle {

using trmax::Index;
using trmax::Matrix;
using trmax::Vector;

struct EigResult {
  Vector values;   // nonincreasing
  Matrix vectors;  // columns match values
};

// Cyclic Jacobi eigenvalue iteration for symmetric matrices.
inline EigResult jacobi_eig(Matrix a) {
  const Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        off += a(p, q) * a(p, q);
      }
    }
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Index i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (Index i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (Index i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index i, Index j) { return a(i, i) > a(j, j); });
  EigResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.values(j) = a(order[static_cast<size_t>(j)],
                      order[static_cast<size_t>(j)]);
    out.vectors.col(j) = v.col(order[static_cast<size_t>(j)]);
  }
  return out;
}

// Singular values via the eigenvalues of S^T S.
inline Vector singular_values(const Matrix& s) {
  const Matrix gram = s.transpose() * s;
  Vector eigs = jacobi_eig(0.5 * (gram + gram.transpose())).values;
  for (Index i = 0; i < eigs.size(); ++i) {
    eigs(i) = std::sqrt(std::max(0.0, eigs(i)));
  }
  return eigs;
}

inline double trace_norm(const Matrix& s) {
  const Matrix gram = s.rows() <= s.cols() ? Matrix(s * s.transpose())
                                           : Matrix(s.transpose() * s);
  const Vector eigs = jacobi_eig(0.5 * (gram + gram.transpose())).values;
  double sum = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) {
    sum += std::sqrt(std::max(0.0, eigs(i)));
  }
  return sum;
}

inline double topk_eig_sum(const Matrix& sym, Index k) {
  return jacobi_eig(sym).values.head(k).sum();
}

// Scalar-loop objective evaluation.
inline double objective(const Matrix& a, const Matrix& b, const Matrix& d,
                        double theta, const Matrix& x) {
  const Index n = x.rows(), k = x.cols();
  double alpha = 0.0, beta = 0.0, delta = 0.0;
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < n; ++i) {
      double arow = 0.0, brow = 0.0;
      for (Index l = 0; l < n; ++l) {
        arow += a(i, l) * x(l, j);
        brow += b(i, l) * x(l, j);
      }
      alpha += x(i, j) * arow;
      beta += x(i, j) * brow;
      delta += x(i, j) * d(i, j);
    }
  }
  return (alpha + delta) / std::pow(beta, theta);
}

// Scalar-loop E(X) per its defining formula.
inline Matrix nepv_matrix(const Matrix& a, const Matrix& b, const Matrix& d,
                          double theta, const Matrix& x) {
  const Index n = x.rows(), k = x.cols();
  double alpha = 0.0, beta = 0.0, delta = 0.0;
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < n; ++i) {
      for (Index l = 0; l < n; ++l) {
        alpha += x(i, j) * a(i, l) * x(l, j);
        beta += x(i, j) * b(i, l) * x(l, j);
      }
      delta += x(i, j) * d(i, j);
    }
  }
  const double f1 = (alpha + delta) / beta;
  Matrix e(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index l = 0; l < n; ++l) {
      double dx = 0.0;
      for (Index j = 0; j < k; ++j) {
        dx += 0.5 * (d(i, j) * x(l, j) + x(i, j) * d(l, j));
      }
      e(i, l) = 2.0 / std::pow(beta, theta) *
                (a(i, l) + dx - theta * f1 * b(i, l));
    }
  }
  return e;
}

// Random n-by-k orthonormal matrix through Gram-Schmidt on normal draws.
inline Matrix random_stiefel(Index n, Index k, trmax::StreamRng& rng) {
  Matrix x = rng.normal_matrix(n, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < j; ++i) {
      x.col(j) -= x.col(i).dot(x.col(j)) * x.col(i);
    }
    for (Index i = 0; i < j; ++i) {  // second pass for orthogonality
      x.col(j) -= x.col(i).dot(x.col(j)) * x.col(i);
    }
    x.col(j) /= x.col(j).norm();
  }
  return x;
}

inline Matrix random_orthogonal(Index k, trmax::StreamRng& rng) {
  return random_stiefel(k, k, rng);
}

// Exhaustive unit-sphere maximization for 3-dimensional, k = 1 problems on a
// degree grid over the full sphere.
inline double sphere_grid_max(const Matrix& a, const Matrix& b,
                              const Matrix& d, double theta,
                              double step_degrees = 1.0) {
  const double deg = M_PI / 180.0;
  double best = -std::numeric_limits<double>::infinity();
  for (double phi = 0.0; phi <= 180.0 + 1e-9; phi += step_degrees) {
    for (double psi = 0.0; psi < 360.0 - 1e-9; psi += step_degrees) {
      Matrix x(3, 1);
      x(0, 0) = std::sin(phi * deg) * std::cos(psi * deg);
      x(1, 0) = std::sin(phi * deg) * std::sin(psi * deg);
      x(2, 0) = std::cos(phi * deg);
      best = std::max(best, objective(a, b, d, theta, x));
    }
  }
  return best;
}

// Dinkelbach zero-finding for the D = 0, theta = 1 ratio: bisection on
// eta(rho) = sum of the k largest eigenvalues of A - rho B, which is
// nonincreasing in rho when B is positive definite.
inline double dinkelbach_optimum(const Matrix& a, const Matrix& b, Index k,
                                 double tol = 1e-12) {
  const auto eta = [&](double rho) {
    return topk_eig_sum(a - rho * b, k);
  };
  double lo = 0.0, hi = 1.0;
  while (eta(hi) > 0) hi *= 2.0;
  while (eta(lo) < 0) lo = lo == 0.0 ? -1.0 : lo * 2.0;
  for (int i = 0; i < 200 && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eta(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
