#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcap/min_norm_point.hpp"
#include "symcap/symplectic_space.hpp"

namespace symcap {

namespace detail {

/// Oracle interface behind ConvexBody. All methods are pure.
class BodyModel {
 public:
  virtual ~BodyModel() = default;
  virtual double gauge(const Vector& x) const = 0;
  virtual Vector gauge_gradient(const Vector& x) const = 0;
  virtual double support(const Vector& xi) const = 0;
  virtual Vector support_gradient(const Vector& xi) const = 0;
};

}  // namespace detail

/// Bounded convex neighbourhood C of the origin, given by oracles for the gauge μ_C, the support
/// function h_C = μ_{C^0} and their gradients. Radii are with respect to the body's metric G:
/// r·B_G ⊆ C ⊆ R·B_G. Covectors are coordinate vectors, so h_C(ξ) = sup_{x∈C} ξ·x.
class ConvexBody {
 public:
  struct Info {
    std::string kind;
    Matrix metric;
    double inradius = 0.0;
    double circumradius = 0.0;
    double smoothing = 0.0;                // ε of a Minkowski-smoothed polytope (max over parts)
    std::optional<Matrix> quadratic_form;  // A when C = {xᵀAx <= 1}
    std::optional<Matrix> vertices;        // V when C = conv(V) + εB_G
  };

  ConvexBody(std::shared_ptr<const detail::BodyModel> model, Info info)
      : model_(std::move(model)), info_(std::move(info)) {
    if (!(info_.inradius > 0.0) || !(info_.circumradius >= info_.inradius))
      throw InvalidInput("body radii must satisfy 0 < r <= R");
    metric_inv_ = info_.metric.llt().solve(Matrix::Identity(dim(), dim()));
  }

  [[nodiscard]] Eigen::Index dim() const { return info_.metric.rows(); }
  [[nodiscard]] const std::string& kind() const { return info_.kind; }
  [[nodiscard]] const Matrix& metric() const { return info_.metric; }
  [[nodiscard]] const Matrix& metric_inverse() const { return metric_inv_; }
  [[nodiscard]] double inradius() const { return info_.inradius; }
  [[nodiscard]] double circumradius() const { return info_.circumradius; }
  [[nodiscard]] double smoothing() const { return info_.smoothing; }
  [[nodiscard]] const std::optional<Matrix>& quadratic_form() const { return info_.quadratic_form; }
  [[nodiscard]] const std::optional<Matrix>& vertices() const { return info_.vertices; }
  [[nodiscard]] const Info& info() const { return info_; }

  [[nodiscard]] double norm(const Vector& x) const { return std::sqrt(std::max(0.0, x.dot(info_.metric * x))); }
  [[nodiscard]] double dual_norm(const Vector& xi) const { return std::sqrt(std::max(0.0, xi.dot(metric_inv_ * xi))); }

  [[nodiscard]] double gauge(const Vector& x) const {
    check(x);
    return x.isZero(0.0) ? 0.0 : model_->gauge(x);
  }
  [[nodiscard]] Vector gauge_gradient(const Vector& x) const {
    check(x);
    return x.isZero(0.0) ? Vector(Vector::Zero(dim())) : model_->gauge_gradient(x);
  }
  [[nodiscard]] double support(const Vector& xi) const {
    check(xi);
    return xi.isZero(0.0) ? 0.0 : model_->support(xi);
  }
  /// Support point of C in direction ξ (lowest-index choice on ties for polytopes).
  [[nodiscard]] Vector support_gradient(const Vector& xi) const {
    check(xi);
    return xi.isZero(0.0) ? Vector(Vector::Zero(dim())) : model_->support_gradient(xi);
  }

  /// H_C = ½μ_C².
  [[nodiscard]] double hamiltonian(const Vector& x) const {
    const double m = gauge(x);
    return 0.5 * m * m;
  }
  /// dH_C = μ_C ∇μ_C (a covector).
  [[nodiscard]] Vector hamiltonian_gradient(const Vector& x) const { return gauge(x) * gauge_gradient(x); }
  /// H_{C^0} = ½h_C².
  [[nodiscard]] double dual_hamiltonian(const Vector& xi) const {
    const double h = support(xi);
    return 0.5 * h * h;
  }
  /// dH_{C^0} = h_C ∇h_C (a vector).
  [[nodiscard]] Vector dual_hamiltonian_gradient(const Vector& xi) const { return support(xi) * support_gradient(xi); }

  /// Unit outward G-normal at the boundary point x/μ_C(x): n = G^{-1}∇μ / ‖∇μ‖_*, returned as a vector.
  [[nodiscard]] Vector unit_normal(const Vector& x) const {
    const Vector g = gauge_gradient(x);
    return metric_inv_ * g / dual_norm(g);
  }

  [[nodiscard]] bool contains(const Vector& x) const { return gauge(x) <= 1.0; }

  [[nodiscard]] std::shared_ptr<const detail::BodyModel> model() const { return model_; }

 private:
  void check(const Vector& v) const {
    if (v.size() != dim()) throw DimensionMismatch("body oracle: dimension mismatch");
  }

  std::shared_ptr<const detail::BodyModel> model_;
  Info info_;
  Matrix metric_inv_;
};

namespace detail {

/// μ(x) = inf{t > 0 : x/t ∈ C} by bisection, given a membership predicate and a bracket
/// [lo, hi] containing μ(x).
[[nodiscard]] inline double gauge_by_bisection(const Vector& x, const std::function<bool(const Vector&)>& inside,
                                               double lo, double hi) {
  lo *= (1.0 - 1e-9);
  hi *= (1.0 + 1e-9);
  for (int guard = 0; guard < 200 && !inside(x / hi); ++guard) hi *= 2.0;
  for (int guard = 0; guard < 200 && inside(x / lo); ++guard) lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inside(x / mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// ∇μ(x) from a covector normal n at the boundary point q = x/μ(x): ∇μ = n / ⟨n, q⟩.
[[nodiscard]] inline Vector gauge_gradient_from_normal(const Vector& normal, const Vector& boundary_point) {
  return normal / normal.dot(boundary_point);
}

class EllipsoidModel final : public BodyModel {
 public:
  explicit EllipsoidModel(Matrix a) : a_(std::move(a)), a_inv_(a_.llt().solve(Matrix::Identity(a_.rows(), a_.cols()))) {}
  double gauge(const Vector& x) const override { return std::sqrt(std::max(0.0, x.dot(a_ * x))); }
  Vector gauge_gradient(const Vector& x) const override { return a_ * x / gauge(x); }
  double support(const Vector& xi) const override { return std::sqrt(std::max(0.0, xi.dot(a_inv_ * xi))); }
  Vector support_gradient(const Vector& xi) const override { return a_inv_ * xi / support(xi); }

 private:
  Matrix a_;
  Matrix a_inv_;
};

/// conv(vertices) + ε B_G with h(ξ) = max_v ξ·v + ε‖ξ‖_*.
class SmoothedPolytopeModel final : public BodyModel {
 public:
  SmoothedPolytopeModel(Matrix vertices, double eps, Matrix metric, double lo_radius, double hi_radius)
      : v_(std::move(vertices)), eps_(eps), g_(std::move(metric)), r_(lo_radius), big_r_(hi_radius) {
    g_inv_ = g_.llt().solve(Matrix::Identity(g_.rows(), g_.cols()));
    chol_upper_ = g_.llt().matrixU();
  }

  double support(const Vector& xi) const override {
    return (v_.transpose() * xi).maxCoeff() + eps_ * std::sqrt(std::max(0.0, xi.dot(g_inv_ * xi)));
  }

  Vector support_gradient(const Vector& xi) const override {
    const Vector scores = v_.transpose() * xi;
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i)
      if (scores(i) > scores(best)) best = i;
    const Vector gx = g_inv_ * xi;
    return v_.col(best) + eps_ * gx / std::sqrt(std::max(1e-300, xi.dot(gx)));
  }

  /// Nearest point of the polytope to p, in the G metric.
  Vector nearest(const Vector& p) const {
    const Matrix shifted = chol_upper_ * (v_.colwise() - p);
    const auto mnp = min_norm_point(shifted);
    return v_ * mnp.weights;
  }

  bool inside(const Vector& p) const {
    const Vector d = p - nearest(p);
    return std::sqrt(std::max(0.0, d.dot(g_ * d))) <= eps_;
  }

  double gauge(const Vector& x) const override {
    const double nx = std::sqrt(std::max(0.0, x.dot(g_ * x)));
    return gauge_by_bisection(x, [this](const Vector& p) { return inside(p); }, nx / big_r_, nx / r_);
  }

  Vector gauge_gradient(const Vector& x) const override {
    const double mu = gauge(x);
    const Vector q = x / mu;
    const Vector d = q - nearest(q);
    const Vector normal = g_ * d;  // outward covector normal of P + εB at q
    return gauge_gradient_from_normal(normal, q);
  }

 private:
  Matrix v_;
  double eps_;
  Matrix g_;
  Matrix g_inv_;
  Matrix chol_upper_;
  double r_;
  double big_r_;
};

/// Image ΦC under an invertible linear map.
class LinearImageModel final : public BodyModel {
 public:
  LinearImageModel(Matrix phi, std::shared_ptr<const BodyModel> inner)
      : phi_(std::move(phi)), phi_inv_(phi_.fullPivLu().inverse()), inner_(std::move(inner)) {}
  double gauge(const Vector& x) const override { return inner_->gauge(phi_inv_ * x); }
  Vector gauge_gradient(const Vector& x) const override {
    return phi_inv_.transpose() * inner_->gauge_gradient(phi_inv_ * x);
  }
  double support(const Vector& xi) const override { return inner_->support(phi_.transpose() * xi); }
  Vector support_gradient(const Vector& xi) const override {
    return phi_ * inner_->support_gradient(phi_.transpose() * xi);
  }

 private:
  Matrix phi_;
  Matrix phi_inv_;
  std::shared_ptr<const BodyModel> inner_;
};

/// C + v.
class TranslateModel final : public BodyModel {
 public:
  TranslateModel(Vector v, std::shared_ptr<const BodyModel> inner, Matrix metric, double lo_radius, double hi_radius)
      : v_(std::move(v)), inner_(std::move(inner)), g_(std::move(metric)), r_(lo_radius), big_r_(hi_radius) {}
  double support(const Vector& xi) const override { return inner_->support(xi) + xi.dot(v_); }
  Vector support_gradient(const Vector& xi) const override { return inner_->support_gradient(xi) + v_; }
  bool inside(const Vector& p) const {
    const Vector q = p - v_;
    return q.isZero(0.0) || inner_->gauge(q) <= 1.0;
  }
  double gauge(const Vector& x) const override {
    const double nx = std::sqrt(std::max(0.0, x.dot(g_ * x)));
    return gauge_by_bisection(x, [this](const Vector& p) { return inside(p); }, nx / big_r_, nx / r_);
  }
  Vector gauge_gradient(const Vector& x) const override {
    const Vector q = x / gauge(x);
    return gauge_gradient_from_normal(inner_->gauge_gradient(q - v_), q);
  }

 private:
  Vector v_;
  std::shared_ptr<const BodyModel> inner_;
  Matrix g_;
  double r_;
  double big_r_;
};

/// sC.
class ScaleModel final : public BodyModel {
 public:
  ScaleModel(double s, std::shared_ptr<const BodyModel> inner) : s_(s), inner_(std::move(inner)) {}
  double gauge(const Vector& x) const override { return inner_->gauge(x) / s_; }
  Vector gauge_gradient(const Vector& x) const override { return inner_->gauge_gradient(x) / s_; }
  double support(const Vector& xi) const override { return s_ * inner_->support(xi); }
  Vector support_gradient(const Vector& xi) const override { return s_ * inner_->support_gradient(xi); }

 private:
  double s_;
  std::shared_ptr<const BodyModel> inner_;
};

/// LC for a surjective L: R^d → R^m (m < d). h(η) = h_C(Lᵀη); the gauge minimises μ_C over the fibre
/// {y : Ly = α}.
class ProjectionModel final : public BodyModel {
 public:
  ProjectionModel(Matrix l, std::shared_ptr<const BodyModel> inner) : l_(std::move(l)), inner_(std::move(inner)) {
    Eigen::JacobiSVD<Matrix> svd(l_, Eigen::ComputeFullV);
    const auto m = l_.rows();
    const auto d = l_.cols();
    kernel_ = svd.matrixV().rightCols(d - m);
    pinv_ = l_.transpose() * (l_ * l_.transpose()).llt().solve(Matrix::Identity(m, m));
  }

  double support(const Vector& eta) const override { return inner_->support(l_.transpose() * eta); }
  Vector support_gradient(const Vector& eta) const override {
    return l_ * inner_->support_gradient(l_.transpose() * eta);
  }
  double gauge(const Vector& alpha) const override { return inner_->gauge(fibre_minimizer(alpha)); }
  Vector gauge_gradient(const Vector& alpha) const override {
    const Vector g = inner_->gauge_gradient(fibre_minimizer(alpha));
    // ∇μ_C(y*) = Lᵀη at the fibre minimiser; η is the gauge gradient of LC.
    return (l_ * l_.transpose()).llt().solve(l_ * g);
  }

  /// argmin μ_C(y) over Ly = α (BFGS in kernel coordinates; the objective is convex).
  Vector fibre_minimizer(const Vector& alpha) const {
    const Vector y0 = pinv_ * alpha;
    const auto k = kernel_.cols();
    if (k == 0) return y0;
    Vector z = Vector::Zero(k);
    auto f = [&](const Vector& zz) { return inner_->gauge(y0 + kernel_ * zz); };
    auto grad = [&](const Vector& zz) { return Vector(kernel_.transpose() * inner_->gauge_gradient(y0 + kernel_ * zz)); };
    Matrix h = Matrix::Identity(k, k);
    double fz = f(z);
    Vector gz = grad(z);
    const double scale = std::max(fz, 1e-300);
    for (int it = 0; it < 200; ++it) {
      if (gz.norm() <= 1e-13 * scale) break;
      Vector p = -h * gz;
      if (p.dot(gz) >= 0.0) {
        h.setIdentity();
        p = -gz;
      }
      double step = 1.0;
      double fn = f(z + step * p);
      while (fn > fz + 1e-4 * step * p.dot(gz) && step > 1e-20) {
        step *= 0.5;
        fn = f(z + step * p);
      }
      if (step <= 1e-20) break;
      const Vector s = step * p;
      z += s;
      const Vector gn = grad(z);
      const Vector yv = gn - gz;
      const double sy = s.dot(yv);
      if (sy > 1e-300) {
        const double rho = 1.0 / sy;
        const Matrix id = Matrix::Identity(k, k);
        h = (id - rho * s * yv.transpose()) * h * (id - rho * yv * s.transpose()) + rho * s * s.transpose();
      }
      const bool small = std::abs(fz - fn) <= 1e-16 * scale;
      fz = fn;
      gz = gn;
      if (small) break;
    }
    return y0 + kernel_ * z;
  }

 private:
  Matrix l_;
  Matrix kernel_;
  Matrix pinv_;
  std::shared_ptr<const BodyModel> inner_;
};

/// Singular values of G_out^{1/2} M G_in^{-1/2}, descending.
[[nodiscard]] inline Vector metric_singular_values(const Matrix& m, const Matrix& g_in, const Matrix& g_out) {
  Eigen::JacobiSVD<Matrix> svd(spd_sqrt(g_out) * m * spd_inverse_sqrt(g_in));
  return svd.singularValues();
}

}  // namespace detail

/// Ellipsoid {x : xᵀAx <= 1}; radii measured in `metric`.
[[nodiscard]] inline ConvexBody ellipsoid(const Matrix& a, const Matrix& metric) {
  require_spd(a, "ellipsoid matrix");
  if (metric.rows() != a.rows() || metric.cols() != a.cols()) throw DimensionMismatch("ellipsoid: metric size");
  const Matrix as = 0.5 * (a + a.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> gev(as, metric, Eigen::EigenvaluesOnly);
  const Vector ev = gev.eigenvalues();
  ConvexBody::Info info;
  info.kind = "ellipsoid";
  info.metric = metric;
  info.inradius = 1.0 / std::sqrt(ev(ev.size() - 1));
  info.circumradius = 1.0 / std::sqrt(ev(0));
  info.quadratic_form = as;
  return ConvexBody(std::make_shared<detail::EllipsoidModel>(as), std::move(info));
}

[[nodiscard]] inline ConvexBody ellipsoid(const Matrix& a) { return ellipsoid(a, Matrix::Identity(a.rows(), a.cols())); }

[[nodiscard]] inline ConvexBody ellipsoid(const Matrix& a, const SymplecticSpace& space) {
  space.require_dim(a.rows(), "ellipsoid");
  return ellipsoid(a, space.metric());
}

/// Closed G-ball of the given radius.
[[nodiscard]] inline ConvexBody ball(const SymplecticSpace& space, double radius = 1.0) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be positive");
  const Matrix a = space.metric() / (radius * radius);
  ConvexBody::Info info;
  info.kind = "ball";
  info.metric = space.metric();
  info.inradius = radius;
  info.circumradius = radius;
  info.quadratic_form = a;
  return ConvexBody(std::make_shared<detail::EllipsoidModel>(a), std::move(info));
}

/// conv(vertices) + εB_G; vertices are the columns of `vertices`. The origin must be interior to
/// conv(vertices). Facets are enumerated to certify this and to compute the inradius, so the vertex
/// count should stay modest in high dimension.
[[nodiscard]] inline ConvexBody smoothed_polytope(const Matrix& vertices, double eps, const SymplecticSpace& space) {
  space.require_dim(vertices.rows(), "smoothed_polytope");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("polytope smoothing epsilon must be positive");
  if (!all_finite(vertices)) throw InvalidInput("polytope vertices must be finite");
  const auto d = vertices.rows();
  const auto m = vertices.cols();
  if (m < d + 1) throw OriginNotInterior("polytope needs at least dim+1 vertices to contain the origin in its interior");
  const Matrix& g = space.metric();
  const Matrix& g_inv = space.metric_inverse();

  // Enumerate supporting hyperplanes through d vertices.
  double r_poly = std::numeric_limits<double>::infinity();
  bool any_facet = false;
  double vscale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) vscale = std::max(vscale, vertices.col(i).norm());
  const double tol = 1e-10 * std::max(1.0, vscale);
  std::vector<Eigen::Index> idx(static_cast<size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) idx[static_cast<size_t>(i)] = i;
  long long combos = 0;
  while (true) {
    if (++combos > 5'000'000) throw InvalidInput("polytope too large for facet enumeration");
    Matrix diffs(d - 1, d);
    for (Eigen::Index r = 1; r < d; ++r)
      diffs.row(r - 1) = (vertices.col(idx[static_cast<size_t>(r)]) - vertices.col(idx[0])).transpose();
    Vector normal;
    bool ok = true;
    if (d == 1) {
      normal = Vector::Ones(1);
    } else {
      Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeFullV);
      const Vector s = svd.singularValues();
      ok = s.size() == d - 1 && s(s.size() - 1) > 1e-12 * std::max(1.0, s(0));
      normal = svd.matrixV().col(d - 1);
    }
    if (ok) {
      double offset = normal.dot(vertices.col(idx[0]));
      const Vector proj = vertices.transpose() * normal;
      if (proj.maxCoeff() <= offset + tol || proj.minCoeff() >= offset - tol) {
        if (proj.minCoeff() >= offset - tol) {
          normal = -normal;
          offset = -offset;
        }
        // facet {n·x = offset}, polytope on the side n·x <= offset
        if (offset <= tol) throw OriginNotInterior("origin is not interior to the polytope");
        any_facet = true;
        r_poly = std::min(r_poly, offset / std::sqrt(normal.dot(g_inv * normal)));
      }
    }
    // next combination
    Eigen::Index pos = d - 1;
    while (pos >= 0 && idx[static_cast<size_t>(pos)] == m - d + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<size_t>(pos)];
    for (Eigen::Index q = pos + 1; q < d; ++q) idx[static_cast<size_t>(q)] = idx[static_cast<size_t>(q - 1)] + 1;
  }
  if (!any_facet || !std::isfinite(r_poly)) throw OriginNotInterior("polytope is degenerate");

  double big_r = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) big_r = std::max(big_r, std::sqrt(vertices.col(i).dot(g * vertices.col(i))));
  ConvexBody::Info info;
  info.kind = "polytope";
  info.metric = g;
  info.inradius = r_poly + eps;
  info.circumradius = big_r + eps;
  info.smoothing = eps;
  info.vertices = vertices;
  return ConvexBody(std::make_shared<detail::SmoothedPolytopeModel>(vertices, eps, g, info.inradius, info.circumradius),
                    std::move(info));
}

/// ΦC for an invertible matrix Φ.
[[nodiscard]] inline ConvexBody linear_image(const Matrix& phi, const ConvexBody& body) {
  if (!is_square(phi) || phi.rows() != body.dim()) throw DimensionMismatch("linear_image: map size");
  if (!all_finite(phi)) throw InvalidInput("linear_image: map must be finite");
  Eigen::JacobiSVD<Matrix> plain(phi);
  const Vector ps = plain.singularValues();
  if (ps(ps.size() - 1) <= 1e-12 * std::max(1.0, ps(0))) throw InvalidInput("linear_image: map is singular");
  const Vector s = detail::metric_singular_values(phi, body.metric(), body.metric());
  ConvexBody::Info info = body.info();
  info.kind = "linear_image";
  info.vertices.reset();
  info.inradius = body.inradius() * s(s.size() - 1);
  info.circumradius = body.circumradius() * s(0);
  if (body.quadratic_form()) {
    const Matrix pinv = phi.fullPivLu().inverse();
    const Matrix a = pinv.transpose() * (*body.quadratic_form()) * pinv;
    info.quadratic_form = 0.5 * (a + a.transpose());
  }
  return ConvexBody(std::make_shared<detail::LinearImageModel>(phi, body.model()), std::move(info));
}

[[nodiscard]] inline ConvexBody linear_image(const LinearSymplecticMap& phi, const ConvexBody& body) {
  return linear_image(phi.matrix(), body);
}

/// C + v; requires -v in the interior of C.
[[nodiscard]] inline ConvexBody translate(const ConvexBody& body, const Vector& v) {
  if (v.size() != body.dim()) throw DimensionMismatch("translate: vector size");
  if (!all_finite(v)) throw InvalidInput("translate: vector must be finite");
  if (v.isZero(0.0)) return body;
  const double m = body.gauge(-v);
  if (!(m < 1.0)) throw OriginNotInterior("translate: origin leaves the interior of the body");
  const double nv = body.norm(v);
  ConvexBody::Info info = body.info();
  info.kind = "translate";
  // -v ∈ mC and rB ⊆ C give -v + (1-m) r B ⊆ C
  info.inradius = std::max(body.inradius() - nv, (1.0 - m) * body.inradius());
  info.circumradius = body.circumradius() + nv;
  info.quadratic_form.reset();
  if (info.vertices) info.vertices = (info.vertices->colwise() + v).eval();
  auto model = std::make_shared<detail::TranslateModel>(v, body.model(), body.metric(), info.inradius,
                                                        info.circumradius);
  return ConvexBody(std::move(model), std::move(info));
}

/// sC for s > 0.
[[nodiscard]] inline ConvexBody scale(const ConvexBody& body, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("scale factor must be positive");
  ConvexBody::Info info = body.info();
  info.kind = "scale";
  info.inradius *= s;
  info.circumradius *= s;
  info.smoothing *= s;
  if (info.quadratic_form) info.quadratic_form = *info.quadratic_form / (s * s);
  if (info.vertices) info.vertices = (*info.vertices * s).eval();
  return ConvexBody(std::make_shared<detail::ScaleModel>(s, body.model()), std::move(info));
}

/// L C ⊂ R^m for a surjective L : R^d → R^m, radii measured in `target_metric`. Ellipsoids map to
/// ellipsoids in closed form unless `force_generic` is set.
[[nodiscard]] inline ConvexBody projected(const Matrix& l, const ConvexBody& body, const Matrix& target_metric,
                                          bool force_generic = false) {
  if (l.cols() != body.dim() || l.rows() > l.cols() || l.rows() == 0) throw DimensionMismatch("projected: map size");
  if (target_metric.rows() != l.rows() || target_metric.cols() != l.rows())
    throw DimensionMismatch("projected: metric size");
  const Vector s = detail::metric_singular_values(l, body.metric(), target_metric);
  if (s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0))) throw InvalidInput("projected: map is not surjective");
  if (body.quadratic_form() && !force_generic) {
    const Matrix a_inv = body.quadratic_form()->llt().solve(Matrix::Identity(body.dim(), body.dim()));
    const Matrix shadow = l * a_inv * l.transpose();
    const Matrix a = shadow.llt().solve(Matrix::Identity(l.rows(), l.rows()));
    return ellipsoid(0.5 * (a + a.transpose()), target_metric);
  }
  ConvexBody::Info info;
  info.kind = "projection";
  info.metric = target_metric;
  info.inradius = body.inradius() * s(s.size() - 1);
  info.circumradius = body.circumradius() * s(0);
  info.smoothing = body.smoothing();
  return ConvexBody(std::make_shared<detail::ProjectionModel>(l, body.model()), std::move(info));
}

}  // namespace symcap
