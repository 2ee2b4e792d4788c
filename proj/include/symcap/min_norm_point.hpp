#pragma once

#include <algorithm>
#include <vector>

#include "symcap/linalg.hpp"

namespace symcap::detail {

struct MinNormPoint {
  Vector point;    // nearest point of conv(columns) to the origin
  Vector weights;  // convex weights, one per column
};

/// Wolfe's minimum-norm-point algorithm for the convex hull of the columns of `points`.
[[nodiscard]] inline MinNormPoint min_norm_point(const Matrix& points) {
  const auto m = points.cols();
  if (m == 0) throw InvalidInput("min_norm_point needs at least one point");
  double scale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, points.col(i).squaredNorm());
  const double tol = 1e-13 * std::max(scale, 1e-300);
  const double wtol = 1e-12;

  std::vector<Eigen::Index> active;
  std::vector<double> w;
  {
    Eigen::Index i0 = 0;
    points.colwise().squaredNorm().minCoeff(&i0);
    active.push_back(i0);
    w.push_back(1.0);
  }
  Vector x = points.col(active[0]);

  auto affine_minimizer = [&](const std::vector<Eigen::Index>& s) {
    const auto k = static_cast<Eigen::Index>(s.size());
    Matrix a = Matrix::Zero(k + 1, k + 1);
    Vector rhs = Vector::Zero(k + 1);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) a(i, j) = points.col(s[i]).dot(points.col(s[j]));
      a(i, k) = 1.0;
      a(k, i) = 1.0;
    }
    rhs(k) = 1.0;
    const Vector sol = a.completeOrthogonalDecomposition().solve(rhs);
    return Vector(sol.head(k));
  };

  for (int major = 0; major < 50 * static_cast<int>(m) + 50; ++major) {
    Eigen::Index j = 0;
    (x.transpose() * points).minCoeff(&j);
    if (x.squaredNorm() - x.dot(points.col(j)) <= tol) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    w.push_back(0.0);

    for (int minor = 0; minor < static_cast<int>(m) + 5; ++minor) {
      const Vector alpha = affine_minimizer(active);
      if (alpha.minCoeff() > wtol) {
        for (size_t i = 0; i < w.size(); ++i) w[i] = alpha(static_cast<Eigen::Index>(i));
        break;
      }
      double theta = 1.0;
      for (size_t i = 0; i < w.size(); ++i) {
        const double ai = alpha(static_cast<Eigen::Index>(i));
        if (ai <= wtol && w[i] - ai > 0.0) theta = std::min(theta, w[i] / (w[i] - ai));
      }
      for (size_t i = 0; i < w.size(); ++i) w[i] = (1.0 - theta) * w[i] + theta * alpha(static_cast<Eigen::Index>(i));
      std::vector<Eigen::Index> keep_idx;
      std::vector<double> keep_w;
      for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] > wtol) {
          keep_idx.push_back(active[i]);
          keep_w.push_back(w[i]);
        }
      }
      if (keep_idx.empty()) {
        // numerically collapsed; keep the best single vertex
        keep_idx.push_back(j);
        keep_w.push_back(1.0);
      }
      double total = 0.0;
      for (double v : keep_w) total += v;
      for (double& v : keep_w) v /= total;
      active = std::move(keep_idx);
      w = std::move(keep_w);
    }
    x.setZero();
    for (size_t i = 0; i < w.size(); ++i) x += w[i] * points.col(active[i]);
  }

  MinNormPoint out;
  out.point = x;
  out.weights = Vector::Zero(m);
  for (size_t i = 0; i < w.size(); ++i) out.weights(active[i]) = w[i];
  return out;
}

}  // namespace symcap::detail
