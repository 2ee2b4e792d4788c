#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "symcap/linalg.hpp"

namespace symcap {

/// A compatible inner product (Gram matrix G) together with the complex structure J it induces.
struct CompatibleStructure {
  Matrix metric;
  Matrix complex_structure;
};

/// Given a skew invertible J0 representing ω(x,y) = (J0 x)·y, returns G = (J0ᵀJ0)^{1/2} and
/// J = G^{-1}J0, so that J² = -I and ω(x,y) = (Jx, y)_G.
[[nodiscard]] inline CompatibleStructure make_compatible_inner_product(const Matrix& j0) {
  if (!is_square(j0) || j0.rows() == 0 || j0.rows() % 2 != 0)
    throw InvalidInput("J0 must be a square matrix of even positive size");
  if (!all_finite(j0)) throw InvalidInput("J0 has non-finite entries");
  if (!is_skew(j0, 1e-12)) throw InvalidInput("J0 must be skew-symmetric");
  Eigen::JacobiSVD<Matrix> svd(j0);
  const Vector sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * std::max(1.0, sv(0))) throw InvalidInput("J0 must be invertible");

  const Matrix a = spd_sqrt(j0.transpose() * j0);
  CompatibleStructure out;
  out.metric = 0.5 * (a + a.transpose());
  out.complex_structure = out.metric.partialPivLu().solve(j0);
  return out;
}

/// Finite-dimensional symplectic vector space R^{2n}, ω(x,y) = xᵀ Ω_m y, with a compatible
/// inner product (x,y)_G = xᵀGy and complex structure J. Covectors are coordinate vectors;
/// the map Ω: x ↦ ω(x,·) is the matrix Ω_mᵀ = GJ.
class SymplecticSpace {
 public:
  /// Validating constructor; `form` is Ω_m.
  SymplecticSpace(Matrix form, Matrix complex_structure, Matrix metric)
      : form_(std::move(form)), j_(std::move(complex_structure)), g_(std::move(metric)) {
    const auto d = form_.rows();
    if (d == 0 || d % 2 != 0 || !is_square(form_)) throw InvalidInput("symplectic form must be 2n x 2n, n >= 1");
    if (j_.rows() != d || j_.cols() != d || g_.rows() != d || g_.cols() != d)
      throw DimensionMismatch("form, complex structure and metric must have equal size");
    if (!is_skew(form_, 1e-12)) throw InvalidInput("symplectic form must be skew-symmetric");
    auto lu = form_.fullPivLu();
    if (!lu.isInvertible()) throw InvalidInput("symplectic form is degenerate");
    require_spd(g_, "metric");
    const Matrix id = Matrix::Identity(d, d);
    const double scale = std::max(1.0, inf_norm(g_));
    if (inf_norm(j_ * j_ + id) > 1e-10) throw InvalidInput("complex structure must satisfy J^2 = -I");
    if (inf_norm(j_.transpose() * g_ * j_ - g_) > 1e-10 * scale) throw InvalidInput("J must be a G-isometry");
    if (inf_norm(j_.transpose() * g_ - form_) > 1e-10 * scale) throw InvalidInput("omega(x,y) must equal (Jx,y)_G");
    omega_ = form_.transpose();
    omega_inv_ = omega_.fullPivLu().inverse();
    g_inv_ = g_.llt().solve(id);
  }

  /// R^{2n} with ω = Σ dq_i ∧ dp_i, G = I, J = [[0,-I],[I,0]].
  [[nodiscard]] static SymplecticSpace canonical(Eigen::Index n) {
    if (n < 1) throw InvalidInput("canonical space needs n >= 1");
    const Matrix j = canonical_j(n);
    return SymplecticSpace(j.transpose(), j, Matrix::Identity(2 * n, 2 * n));
  }

  /// Space with the given form matrix Ω_m and the compatible structure from the operator square root.
  [[nodiscard]] static SymplecticSpace from_form(const Matrix& form) {
    const auto cs = make_compatible_inner_product(form.transpose());
    return SymplecticSpace(form, cs.complex_structure, cs.metric);
  }

  [[nodiscard]] Eigen::Index dim() const { return form_.rows(); }
  [[nodiscard]] Eigen::Index half_dim() const { return form_.rows() / 2; }
  [[nodiscard]] const Matrix& form() const { return form_; }
  [[nodiscard]] const Matrix& complex_structure() const { return j_; }
  [[nodiscard]] const Matrix& metric() const { return g_; }
  [[nodiscard]] const Matrix& metric_inverse() const { return g_inv_; }
  /// Ω as a matrix acting on vectors: ⟨Ωx, y⟩ = ω(x, y).
  [[nodiscard]] const Matrix& omega() const { return omega_; }
  [[nodiscard]] const Matrix& omega_inverse() const { return omega_inv_; }

  [[nodiscard]] double omega(const Vector& x, const Vector& y) const { return x.dot(form_ * y); }
  [[nodiscard]] double inner(const Vector& x, const Vector& y) const { return x.dot(g_ * y); }
  [[nodiscard]] double norm(const Vector& x) const { return std::sqrt(std::max(0.0, x.dot(g_ * x))); }
  [[nodiscard]] double dual_norm(const Vector& xi) const { return std::sqrt(std::max(0.0, xi.dot(g_inv_ * xi))); }

  void require_dim(Eigen::Index d, const char* what) const {
    if (d != dim()) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
  }

 private:
  Matrix form_;
  Matrix j_;
  Matrix g_;
  Matrix omega_;
  Matrix omega_inv_;
  Matrix g_inv_;
};

/// Linear map Φ with ΦᵀΩ_mΦ = Ω_m.
class LinearSymplecticMap {
 public:
  LinearSymplecticMap(Matrix m, const SymplecticSpace& space, double tol = 1e-8) : m_(std::move(m)) {
    space.require_dim(m_.rows(), "LinearSymplecticMap");
    if (!is_square(m_)) throw InvalidInput("symplectic map must be square");
    const double scale = std::max(1.0, inf_norm(m_) * inf_norm(m_));
    if (inf_norm(m_.transpose() * space.form() * m_ - space.form()) > tol * scale)
      throw NotSymplectic("matrix does not preserve the symplectic form");
  }

  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] Matrix inverse(const SymplecticSpace& space) const {
    // Φ^{-1} = Ω_m^{-1} Φᵀ Ω_m
    return space.form().fullPivLu().solve(m_.transpose() * space.form());
  }

  /// Spectral condition number with respect to the space's metric.
  [[nodiscard]] double condition_number(const SymplecticSpace& space) const {
    const Matrix gh = spd_sqrt(space.metric());
    const Matrix gih = spd_inverse_sqrt(space.metric());
    Eigen::JacobiSVD<Matrix> svd(gh * m_ * gih);
    const Vector s = svd.singularValues();
    return s(0) / s(s.size() - 1);
  }

 private:
  Matrix m_;
};

/// exp(magnitude · Ω_m^{-1} S) for a random symmetric S; deterministic per seed.
[[nodiscard]] inline LinearSymplecticMap random_symplectic(const SymplecticSpace& space, std::uint64_t seed,
                                                           double magnitude) {
  if (!(magnitude >= 0.0)) throw InvalidInput("magnitude must be >= 0");
  const auto d = space.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix r(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) r(i, j) = normal(rng);
  const Matrix s = (r + r.transpose()) / (2.0 * std::sqrt(static_cast<double>(d)));
  // Ω_m^{-1} S is Hamiltonian: XᵀΩ_m + Ω_m X = 0.
  const Matrix x = magnitude * space.form().fullPivLu().solve(s);
  Matrix phi = x.exp();
  return LinearSymplecticMap(std::move(phi), space, 1e-10);
}

/// Basis matrix whose columns span H0; throws if the columns are linearly dependent.
inline void require_independent(const Matrix& basis, const SymplecticSpace& space) {
  space.require_dim(basis.rows(), "subspace basis");
  if (basis.cols() == 0 || basis.cols() > basis.rows()) throw InvalidInput("subspace basis has invalid size");
  Eigen::JacobiSVD<Matrix> svd(basis);
  const Vector s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-10 * std::max(1.0, s(0))) throw InvalidInput("subspace basis is linearly dependent");
}

/// Restriction of ω to span(basis) in basis coordinates: Σ = Uᵀ Ω_m U.
[[nodiscard]] inline Matrix restricted_form(const SymplecticSpace& space, const Matrix& basis) {
  return basis.transpose() * space.form() * basis;
}

[[nodiscard]] inline bool restricted_form_is_nondegenerate(const Matrix& sigma, const Matrix& basis) {
  if (sigma.rows() % 2 != 0) return false;
  Eigen::JacobiSVD<Matrix> svd(sigma);
  const Vector s = svd.singularValues();
  Eigen::JacobiSVD<Matrix> bsvd(basis);
  const double scale = bsvd.singularValues()(0);
  return s(s.size() - 1) > 1e-10 * std::max(1.0, scale * scale);
}

/// True iff ω restricted to span(basis) is non-degenerate.
[[nodiscard]] inline bool is_symplectic_subspace(const SymplecticSpace& space, const Matrix& basis) {
  require_independent(basis, space);
  return restricted_form_is_nondegenerate(restricted_form(space, basis), basis);
}

/// Equivalent criterion H = J H0 ⊕ H0^⊥ (G-orthogonal complement).
[[nodiscard]] inline bool symplectic_splitting_holds(const SymplecticSpace& space, const Matrix& basis) {
  require_independent(basis, space);
  const auto d = space.dim();
  const auto k = basis.cols();
  // H0^⊥ = ker(Uᵀ G)
  Eigen::JacobiSVD<Matrix> svd(basis.transpose() * space.metric(), Eigen::ComputeFullV);
  const Matrix complement = svd.matrixV().rightCols(d - k);
  Matrix joined(d, d);
  joined << space.complex_structure() * basis, complement;
  Eigen::JacobiSVD<Matrix> jsvd(joined);
  const Vector s = jsvd.singularValues();
  return s(s.size() - 1) > 1e-10 * std::max(1.0, s(0));
}

/// Symplectic subspace H0 = span(U) with its projector along the ω-orthogonal complement and the
/// coordinate map L (P = U L).
class SymplecticSubspace {
 public:
  SymplecticSubspace(const SymplecticSpace& space, Matrix basis) : basis_(std::move(basis)) {
    require_independent(basis_, space);
    sigma_ = symcap::restricted_form(space, basis_);
    if (!restricted_form_is_nondegenerate(sigma_, basis_))
      throw NotSymplectic("omega restricted to the subspace is degenerate");
    coords_ = sigma_.fullPivLu().solve(basis_.transpose() * space.form());
    projector_ = basis_ * coords_;
  }

  [[nodiscard]] const Matrix& basis() const { return basis_; }
  /// Uᵀ Ω_m U: the form of H0 in basis coordinates.
  [[nodiscard]] const Matrix& restricted_form() const { return sigma_; }
  /// L with Px = U (L x).
  [[nodiscard]] const Matrix& coordinate_map() const { return coords_; }
  [[nodiscard]] const Matrix& projector() const { return projector_; }
  [[nodiscard]] Eigen::Index dim() const { return basis_.cols(); }

  /// H0 in basis coordinates, with the compatible structure built from its form.
  [[nodiscard]] SymplecticSpace coordinate_space() const { return SymplecticSpace::from_form(sigma_); }

 private:
  Matrix basis_;
  Matrix sigma_;
  Matrix coords_;
  Matrix projector_;
};

/// Projector onto span(basis) along its symplectic orthogonal complement.
[[nodiscard]] inline Matrix symplectic_projector(const SymplecticSpace& space, const Matrix& basis) {
  return SymplecticSubspace(space, basis).projector();
}

}  // namespace symcap
