#pragma once

#include <vector>

#include "symcap/symplectic_space.hpp"

namespace symcap {

/// Trigonometric basis sampled on the uniform grid t_j = j/M, j = 0..M-1.
/// Row 0 is the constant mode, row 2k-1 is cos(2πkt), row 2k is sin(2πkt).
struct SpectralGrid {
  int modes = 0;
  int points = 0;
  Matrix values;       // (2K+1) × M
  Matrix derivatives;  // (2K+1) × M, d/dt of each basis function

  SpectralGrid(int k, int m) : modes(k), points(m), values(2 * k + 1, m), derivatives(2 * k + 1, m) {
    for (int j = 0; j < m; ++j) {
      const double t = static_cast<double>(j) / m;
      values(0, j) = 1.0;
      derivatives(0, j) = 0.0;
      for (int q = 1; q <= k; ++q) {
        const double w = 2.0 * kPi * q;
        const double c = std::cos(w * t);
        const double s = std::sin(w * t);
        values(2 * q - 1, j) = c;
        values(2 * q, j) = s;
        derivatives(2 * q - 1, j) = -w * s;
        derivatives(2 * q, j) = w * c;
      }
    }
  }
};

/// Real 1-periodic loop ξ(t) = a_0 + Σ_{k=1..K} (a_k cos 2πkt + b_k sin 2πkt) with a_k, b_k in R^d,
/// stored column-wise as [a_0, a_1, b_1, ..., a_K, b_K], plus the number M of quadrature samples.
class ClosedCurve {
 public:
  ClosedCurve(Matrix coefficients, int grid) : c_(std::move(coefficients)), grid_(grid) {
    if (c_.rows() == 0 || c_.cols() == 0 || c_.cols() % 2 == 0)
      throw InvalidInput("curve coefficients must be d x (2K+1)");
    if (grid_ < 1 || grid_ < 4 * modes()) throw InvalidInput("curve grid must satisfy M >= 4K and M >= 1");
    if (!all_finite(c_)) throw InvalidInput("curve coefficients must be finite");
  }

  [[nodiscard]] static ClosedCurve zero(Eigen::Index dim, int modes, int grid) {
    return ClosedCurve(Matrix::Zero(dim, 2 * modes + 1), grid);
  }

  /// t ↦ cos(2πkt) a + sin(2πkt) b (plus nothing else).
  [[nodiscard]] static ClosedCurve harmonic(const Vector& a, const Vector& b, int k, int modes, int grid) {
    if (k < 1 || k > modes) throw InvalidInput("harmonic index out of range");
    Matrix c = Matrix::Zero(a.size(), 2 * modes + 1);
    c.col(2 * k - 1) = a;
    c.col(2 * k) = b;
    return ClosedCurve(std::move(c), grid);
  }

  /// Least-squares trigonometric projection of N uniform samples (columns, t_j = j/N) onto K modes.
  [[nodiscard]] static ClosedCurve from_samples(const Matrix& samples, int modes, int grid) {
    const auto n = samples.cols();
    if (n < 2 * modes + 1) throw InvalidInput("need at least 2K+1 samples to fit K modes");
    const SpectralGrid basis(modes, static_cast<int>(n));
    Matrix c = samples * basis.values.transpose() * (2.0 / static_cast<double>(n));
    c.col(0) *= 0.5;
    return ClosedCurve(std::move(c), grid);
  }

  [[nodiscard]] Eigen::Index dim() const { return c_.rows(); }
  [[nodiscard]] int modes() const { return static_cast<int>(c_.cols() / 2); }
  [[nodiscard]] int grid() const { return grid_; }
  [[nodiscard]] const Matrix& coefficients() const { return c_; }
  [[nodiscard]] Vector mean() const { return c_.col(0); }
  [[nodiscard]] Vector cos_coefficient(int k) const { return k == 0 ? Vector(c_.col(0)) : Vector(c_.col(2 * k - 1)); }
  [[nodiscard]] Vector sin_coefficient(int k) const { return k == 0 ? Vector::Zero(dim()) : Vector(c_.col(2 * k)); }

  [[nodiscard]] Vector operator()(double t) const {
    Vector x = c_.col(0);
    for (int k = 1; k <= modes(); ++k) {
      const double w = 2.0 * kPi * k;
      x += std::cos(w * t) * c_.col(2 * k - 1) + std::sin(w * t) * c_.col(2 * k);
    }
    return x;
  }

  [[nodiscard]] Vector derivative(double t) const {
    Vector x = Vector::Zero(dim());
    for (int k = 1; k <= modes(); ++k) {
      const double w = 2.0 * kPi * k;
      x += w * (-std::sin(w * t) * c_.col(2 * k - 1) + std::cos(w * t) * c_.col(2 * k));
    }
    return x;
  }

  /// d × M matrix of ξ(t_j).
  [[nodiscard]] Matrix samples() const { return c_ * SpectralGrid(modes(), grid_).values; }
  [[nodiscard]] Matrix samples(const SpectralGrid& g) const { return c_ * g.values; }
  /// d × M matrix of ξ̇(t_j), computed spectrally.
  [[nodiscard]] Matrix derivative_samples() const { return c_ * SpectralGrid(modes(), grid_).derivatives; }
  [[nodiscard]] Matrix derivative_samples(const SpectralGrid& g) const { return c_ * g.derivatives; }

  [[nodiscard]] ClosedCurve scaled(double r) const { return ClosedCurve(r * c_, grid_); }
  [[nodiscard]] ClosedCurve translated(const Vector& v) const {
    Matrix c = c_;
    c.col(0) += v;
    return ClosedCurve(std::move(c), grid_);
  }
  /// t ↦ Φ ξ(t).
  [[nodiscard]] ClosedCurve mapped(const Matrix& phi) const { return ClosedCurve(phi * c_, grid_); }
  [[nodiscard]] ClosedCurve with_grid(int grid) const { return ClosedCurve(c_, grid); }
  /// Zero-padded or truncated to `modes`, keeping the quadrature oversampling at >= 4K.
  [[nodiscard]] ClosedCurve with_modes(int modes, int grid) const {
    Matrix c = Matrix::Zero(dim(), 2 * modes + 1);
    const auto keep = std::min<Eigen::Index>(c.cols(), c_.cols());
    c.leftCols(keep) = c_.leftCols(keep);
    return ClosedCurve(std::move(c), grid);
  }

  /// Fraction of Σ_k k²(|a_k|²+|b_k|²) carried by each mode k = 1..K.
  [[nodiscard]] std::vector<double> mode_energy() const {
    std::vector<double> e(static_cast<size_t>(modes()), 0.0);
    double total = 0.0;
    for (int k = 1; k <= modes(); ++k) {
      const double v = static_cast<double>(k) * k * (c_.col(2 * k - 1).squaredNorm() + c_.col(2 * k).squaredNorm());
      e[static_cast<size_t>(k - 1)] = v;
      total += v;
    }
    if (total > 0)
      for (double& v : e) v /= total;
    return e;
  }

 private:
  Matrix c_;
  int grid_;
};

/// Symplectic action 𝔸(x) = -½∫⟨Ωẋ, x⟩ dt. For band-limited loops the integral is the exact
/// quadratic form -Σ_k πk a_kᵀ Ω b_k, which the M-point trapezoid rule reproduces for M > 2K.
[[nodiscard]] inline double action(const ClosedCurve& x, const SymplecticSpace& space) {
  space.require_dim(x.dim(), "action");
  const Matrix& w = space.omega();
  double a = 0.0;
  for (int k = 1; k <= x.modes(); ++k)
    a -= kPi * k * x.cos_coefficient(k).dot(w * x.sin_coefficient(k));
  return a;
}

/// Dual action 𝔸*(ξ) = ½∫⟨ξ, Ω^{-1}ξ̇⟩ dt = Σ_k πk a_kᵀ Ω^{-1} b_k.
[[nodiscard]] inline double dual_action(const ClosedCurve& xi, const SymplecticSpace& space) {
  space.require_dim(xi.dim(), "dual_action");
  const Matrix& winv = space.omega_inverse();
  double a = 0.0;
  for (int k = 1; k <= xi.modes(); ++k)
    a += kPi * k * xi.cos_coefficient(k).dot(winv * xi.sin_coefficient(k));
  return a;
}

/// Gradient of 𝔸* with respect to the coefficient matrix (same layout as the coefficients).
[[nodiscard]] inline Matrix dual_action_gradient(const Matrix& coeffs, const SymplecticSpace& space) {
  const Matrix& winv = space.omega_inverse();
  Matrix g = Matrix::Zero(coeffs.rows(), coeffs.cols());
  const auto k_max = coeffs.cols() / 2;
  for (Eigen::Index k = 1; k <= k_max; ++k) {
    const double f = kPi * static_cast<double>(k);
    g.col(2 * k - 1) = f * (winv * coeffs.col(2 * k));
    g.col(2 * k) = -f * (winv * coeffs.col(2 * k - 1));  // Ω^{-T} = -Ω^{-1}
  }
  return g;
}

/// Circle t ↦ cos(2πt) ξ0 - sin(2πt) Jᵀ ξ0 = e^{-2πt J*} ξ0 in the dual; dual action π‖ξ0‖²_*.
[[nodiscard]] inline ClosedCurve dual_circle(const Vector& xi0, const SymplecticSpace& space, int modes, int grid) {
  space.require_dim(xi0.size(), "dual_circle");
  return ClosedCurve::harmonic(xi0, -space.complex_structure().transpose() * xi0, 1, modes, grid);
}

/// Primal circle t ↦ e^{2πtJ} x0 = cos(2πt) x0 + sin(2πt) J x0, action π‖x0‖²_G.
[[nodiscard]] inline ClosedCurve primal_circle(const Vector& x0, const SymplecticSpace& space, int modes, int grid) {
  space.require_dim(x0.size(), "primal_circle");
  return ClosedCurve::harmonic(x0, space.complex_structure() * x0, 1, modes, grid);
}

}  // namespace symcap
