#pragma once

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "symcap/error.hpp"

namespace symcap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

[[nodiscard]] inline double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

[[nodiscard]] inline bool is_square(const Matrix& m) { return m.rows() == m.cols(); }

[[nodiscard]] inline bool is_skew(const Matrix& m, double tol = 1e-12) {
  if (!is_square(m)) return false;
  const double scale = std::max(1.0, inf_norm(m));
  return inf_norm(m + m.transpose()) <= tol * scale;
}

[[nodiscard]] inline bool is_symmetric(const Matrix& m, double tol = 1e-12) {
  if (!is_square(m)) return false;
  const double scale = std::max(1.0, inf_norm(m));
  return inf_norm(m - m.transpose()) <= tol * scale;
}

[[nodiscard]] inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// Throws unless `m` is symmetric positive definite; returns its eigenvalues in ascending order.
inline Vector require_spd(const Matrix& m, const std::string& name) {
  if (!is_square(m) || m.rows() == 0) throw InvalidInput(name + " must be a non-empty square matrix");
  if (!all_finite(m)) throw InvalidInput(name + " has non-finite entries");
  if (!is_symmetric(m, 1e-10)) throw InvalidInput(name + " must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const Vector ev = eig.eigenvalues();
  if (ev(0) <= 1e-14 * std::max(1.0, ev(ev.size() - 1))) throw InvalidInput(name + " must be positive definite");
  return ev;
}

/// Symmetric square root of an SPD matrix.
[[nodiscard]] inline Matrix spd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
  return eig.operatorSqrt();
}

[[nodiscard]] inline Matrix spd_inverse_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
  return eig.operatorInverseSqrt();
}

/// Builds an n×n matrix from a row-major flat array.
template <class Range>
[[nodiscard]] Matrix matrix_from_row_major(const Range& values, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (double v : values) {
    m(k / cols, k % cols) = v;
    ++k;
  }
  return m;
}

/// Canonical complex structure [[0,-I],[I,0]] on R^{2n}.
[[nodiscard]] inline Matrix canonical_j(Eigen::Index n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.block(0, n, n, n) = -Matrix::Identity(n, n);
  j.block(n, 0, n, n) = Matrix::Identity(n, n);
  return j;
}

}  // namespace symcap
