#pragma once

#include <complex>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "symcap/convex_body.hpp"
#include "symcap/dual_solver.hpp"

namespace symcap {

// ---------------------------------------------------------------------------------------------
// Linear non-squeezing

struct NonSqueezingReport {
  double volume = 0.0;           // vol_{ω^k}(PΦ(B))
  double bound = 0.0;            // π^k
  bool equality_flag = false;    // Φ^{-1}H0 is J-invariant
  double j_invariance_residual = 0.0;
};

/// ω^k-volume (normalised so the unit 2k-ball has volume π^k) of the projection PΦ(B) of the unit
/// ball onto the symplectic subspace spanned by `basis`, along its symplectic complement.
[[nodiscard]] inline NonSqueezingReport linear_nonsqueezing(const SymplecticSpace& space, const Matrix& phi,
                                                            const Matrix& basis, double equality_tol = 1e-8) {
  space.require_dim(phi.rows(), "linear_nonsqueezing");
  if (!is_square(phi)) throw DimensionMismatch("linear_nonsqueezing: map must be square");
  const SymplecticSubspace sub(space, basis);
  const auto k = sub.dim() / 2;
  // PΦ(B) in basis coordinates is M·B with M = LΦ: the ellipsoid {y : yᵀ(M G^{-1} Mᵀ)^{-1} y <= 1}.
  const Matrix m = sub.coordinate_map() * phi;
  const Matrix shadow = m * space.metric_inverse() * m.transpose();
  NonSqueezingReport out;
  out.bound = std::pow(kPi, static_cast<double>(k));
  out.volume = std::sqrt(std::abs(sub.restricted_form().determinant())) * std::sqrt(shadow.determinant()) * out.bound;

  const Matrix v = phi.fullPivLu().solve(basis);
  const Matrix jv = space.complex_structure() * v;
  const Matrix fit = v * v.completeOrthogonalDecomposition().solve(jv);
  out.j_invariance_residual = (jv - fit).norm() / jv.norm();
  out.equality_flag = out.j_invariance_residual <= equality_tol;
  return out;
}

[[nodiscard]] inline NonSqueezingReport linear_nonsqueezing(const SymplecticSpace& space,
                                                            const LinearSymplecticMap& phi, const Matrix& basis) {
  return linear_nonsqueezing(space, phi.matrix(), basis);
}

/// Columns spanning the first k canonical symplectic planes (q_i, p_i).
[[nodiscard]] inline Matrix coordinate_planes(Eigen::Index n, Eigen::Index k) {
  if (k < 1 || k > n) throw InvalidInput("need 1 <= k <= n");
  Matrix b = Matrix::Zero(2 * n, 2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    b(i, 2 * i) = 1.0;
    b(n + i, 2 * i + 1) = 1.0;
  }
  return b;
}

/// Random 2k-dimensional symplectic subspace (Gaussian basis, resampled until non-degenerate).
[[nodiscard]] inline Matrix random_symplectic_basis(const SymplecticSpace& space, Eigen::Index k, std::uint64_t seed) {
  if (k < 1 || 2 * k > space.dim()) throw InvalidInput("need 1 <= k <= n");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix b(space.dim(), 2 * k);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = normal(rng);
    Eigen::JacobiSVD<Matrix> svd(symcap::restricted_form(space, b));
    const Vector s = svd.singularValues();
    if (s(s.size() - 1) > 1e-3 * s(0)) return b;
  }
  throw NumericalFailure("could not draw a symplectic subspace");
}

struct NonSqueezingRow {
  int trial = 0;
  std::uint64_t seed = 0;
  double volume = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool equality_flag = false;
  double j_invariance_residual = 0.0;
  double condition = 0.0;
};

struct NonSqueezingSweep {
  std::vector<NonSqueezingRow> rows;
  int violations = 0;        // volume < π^k − 1e-9
  int flag_mismatches = 0;   // equality_flag disagrees with |volume − π^k| <= 1e-6
  double min_ratio = std::numeric_limits<double>::infinity();
};

/// Sweep over random symplectic maps exp(magnitude·Ω^{-1}S) with seeds seed, seed+1, ...
[[nodiscard]] inline NonSqueezingSweep nonsqueezing_sweep(Eigen::Index n, Eigen::Index k, int trials,
                                                          std::uint64_t seed, double magnitude = 1.0,
                                                          bool random_subspace = false) {
  if (n < 1 || k < 1 || k > n) throw InvalidInput("nonsqueezing sweep needs 1 <= k <= n");
  if (trials < 0) throw InvalidInput("trials must be >= 0");
  const auto space = SymplecticSpace::canonical(n);
  NonSqueezingSweep out;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    const auto phi = random_symplectic(space, s, magnitude);
    const Matrix basis = random_subspace ? random_symplectic_basis(space, k, s ^ 0x9e3779b97f4a7c15ULL)
                                         : coordinate_planes(n, k);
    const auto rep = linear_nonsqueezing(space, phi, basis);
    NonSqueezingRow row{t, s, rep.volume, rep.bound, rep.volume / rep.bound, rep.equality_flag,
                        rep.j_invariance_residual, phi.condition_number(space)};
    if (rep.volume < rep.bound - 1e-9) ++out.violations;
    if (rep.equality_flag != (std::abs(rep.volume - rep.bound) <= 1e-6)) ++out.flag_mismatches;
    out.min_ratio = std::min(out.min_ratio, row.ratio);
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Projection property

struct ProjectionReport {
  double subspace_capacity = 0.0;
  double full_capacity = 0.0;
  double margin = 0.0;
  CapacityResult subspace_result;
  CapacityResult full_result;
};

/// Capacity of the symplectic projection PC (in basis coordinates, with the restricted form) next
/// to the capacity of C.
[[nodiscard]] inline ProjectionReport projection_capacity(const ConvexBody& body, const Matrix& basis,
                                                          const SymplecticSpace& space, const SolverOptions& opts = {}) {
  const SymplecticSubspace sub(space, basis);
  const SymplecticSpace sub_space = sub.coordinate_space();
  const ConvexBody shadow = projected(sub.coordinate_map(), body, sub_space.metric());
  ProjectionReport out;
  out.subspace_result = solve_capacity(shadow, sub_space, opts);
  out.full_result = solve_capacity(body, space, opts);
  out.subspace_capacity = out.subspace_result.capacity;
  out.full_capacity = out.full_result.capacity;
  out.margin = out.subspace_capacity - out.full_capacity;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Capacity against volume

struct VolumeEstimate {
  double value = 0.0;   // vol_{ω^k}
  double stderr_ = 0.0; // zero for closed forms
  std::string method;
};

/// ω^k-volume with ∫ω^k = k!·√det(Ω)·Lebesgue, so the unit 2k-ball has volume π^k.
/// Closed form for ellipsoids, Steiner formula for smoothed polygons, Monte Carlo otherwise.
[[nodiscard]] inline VolumeEstimate omega_volume(const ConvexBody& body, const SymplecticSpace& space,
                                                 int mc_samples = 200000, std::uint64_t seed = 7) {
  space.require_dim(body.dim(), "omega_volume");
  const auto d = space.dim();
  const auto k = space.half_dim();
  double factorial = 1.0;
  for (Eigen::Index i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
  const double form_density = factorial * std::sqrt(std::abs(space.form().determinant()));
  const double unit_ball_lebesgue = std::pow(kPi, static_cast<double>(k)) / factorial;
  VolumeEstimate out;

  if (body.quadratic_form()) {
    out.value = form_density * unit_ball_lebesgue / std::sqrt(body.quadratic_form()->determinant());
    out.method = "ellipsoid";
    return out;
  }
  if (body.vertices() && d == 2) {
    // Convex hull by monotone chain, then area(P + εB) = area(P) + ε·Σ_e |e|·h_B(n_e) + ε²·area(B).
    const Matrix& v = *body.vertices();
    std::vector<Eigen::Index> order(static_cast<size_t>(v.cols()));
    for (Eigen::Index i = 0; i < v.cols(); ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return v(0, a) < v(0, b) || (v(0, a) == v(0, b) && v(1, a) < v(1, b));
    });
    auto cross = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
      return (v(0, a) - v(0, o)) * (v(1, b) - v(1, o)) - (v(1, a) - v(1, o)) * (v(0, b) - v(0, o));
    };
    std::vector<Eigen::Index> hull;
    for (int pass = 0; pass < 2; ++pass) {
      const size_t base = hull.size();
      for (auto idx : order) {
        while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), idx) <= 0) hull.pop_back();
        hull.push_back(idx);
      }
      hull.pop_back();
      std::reverse(order.begin(), order.end());
    }
    double area = 0.0;
    double mixed = 0.0;
    const Matrix& ginv = space.metric_inverse();
    for (size_t i = 0; i < hull.size(); ++i) {
      const Vector a = v.col(hull[i]);
      const Vector b = v.col(hull[(i + 1) % hull.size()]);
      area += a(0) * b(1) - a(1) * b(0);
      const Vector e = b - a;
      Vector normal(2);
      normal << e(1), -e(0);  // outward for counter-clockwise order
      mixed += std::sqrt(normal.dot(ginv * normal));  // |e|·h_{B_G}(unit normal)
    }
    const double eps = body.smoothing();
    const double lebesgue = 0.5 * area + eps * mixed + eps * eps * kPi / std::sqrt(space.metric().determinant());
    out.value = form_density * lebesgue;
    out.method = "steiner";
    return out;
  }
  // Monte Carlo in the circumscribed G-ball.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Matrix g_inv_sqrt = spd_inverse_sqrt(space.metric());
  const double radius = body.circumradius();
  long hits = 0;
  for (int s = 0; s < mc_samples; ++s) {
    Vector u(d);
    for (auto& x : u) x = normal(rng);
    u *= std::pow(uniform(rng), 1.0 / static_cast<double>(d)) * radius / u.norm();
    if (body.gauge(g_inv_sqrt * u) <= 1.0) ++hits;
  }
  const double p = static_cast<double>(hits) / mc_samples;
  const double box = form_density * unit_ball_lebesgue * std::pow(radius, static_cast<double>(d)) /
                     std::sqrt(space.metric().determinant());
  out.value = p * box;
  out.stderr_ = std::sqrt(p * (1.0 - p) / mc_samples) * box;
  out.method = "monte_carlo";
  return out;
}

struct CapacityVolumeReport {
  double capacity = 0.0;
  VolumeEstimate volume;
  double ratio = 0.0;  // c^k / vol_{ω^k}; 1 for balls
  double ratio_low = 0.0;
  double ratio_high = 0.0;
  bool viterbo_consistent = false;  // ratio_low <= 1 + capacity tolerance
};

[[nodiscard]] inline CapacityVolumeReport capacity_volume_report(const ConvexBody& body, const SymplecticSpace& space,
                                                                 const SolverOptions& opts = {},
                                                                 int mc_samples = 200000) {
  CapacityVolumeReport out;
  out.capacity = solve_capacity(body, space, opts).capacity;
  out.volume = omega_volume(body, space, mc_samples, opts.seed + 7);
  const double ck = std::pow(out.capacity, static_cast<double>(space.half_dim()));
  out.ratio = ck / out.volume.value;
  const double hi_vol = out.volume.value + 3.0 * out.volume.stderr_;
  const double lo_vol = std::max(1e-300, out.volume.value - 3.0 * out.volume.stderr_);
  out.ratio_low = ck / hi_vol;
  out.ratio_high = ck / lo_vol;
  out.viterbo_consistent = out.ratio_low <= 1.0 + opts.capacity_tolerance;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Multiplication-operator flow u ↦ e^{itx}u on L²(a, b), truncated to a grid

struct FlowDemoOptions {
  double a = 1.0;
  double b = 2.0;
  int grid = 256;
  double t_min = 100.0;
  double t_max = 1000.0;
  int time_samples = 4001;
  double energy_level = 0.5;  // capacity of {H <= level}
  bool compute_capacity = true;
  SolverOptions solver = [] {
    SolverOptions o;
    o.modes = 4;
    o.grid = 16;
    o.random_starts = 1;
    return o;
  }();
};

struct FlowDemoReport {
  std::vector<double> x;     // grid points, endpoints included
  double dx = 0.0;
  std::vector<double> times;
  std::vector<double> distance_sq;   // d(t)² = ‖e^{itx}u0 − v‖²
  double mean_distance_sq = 0.0;
  double expected_mean = 0.0;        // ‖u0‖² + ‖v‖²
  double relative_deviation = 0.0;
  double isometry_error = 0.0;       // max_t |‖e^{itx}u0‖ − ‖u0‖|
  double capacity = std::numeric_limits<double>::quiet_NaN();
  double expected_capacity = 0.0;    // 2·level·π/b
  bool capacity_converged = false;
};

using ComplexVector = Eigen::VectorXcd;

[[nodiscard]] inline std::vector<double> flow_grid(double a, double b, int n) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) throw InvalidInput("flow demo needs 0 < a < b");
  if (n < 2) throw InvalidInput("flow demo needs at least 2 grid points");
  std::vector<double> x(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) x[static_cast<size_t>(j)] = a + (b - a) * j / (n - 1);
  return x;
}

/// Gaussian bump on the grid, the default initial state.
[[nodiscard]] inline ComplexVector gaussian_state(const std::vector<double>& x, double center, double width,
                                                  double phase = 0.0) {
  ComplexVector u(static_cast<Eigen::Index>(x.size()));
  for (size_t j = 0; j < x.size(); ++j) {
    const double r = (x[j] - center) / width;
    u(static_cast<Eigen::Index>(j)) = std::polar(std::exp(-r * r), phase * x[j]);
  }
  return u;
}

[[nodiscard]] inline FlowDemoReport multiplication_flow_demo(const ComplexVector& u0, const ComplexVector& v,
                                                             const FlowDemoOptions& opts) {
  FlowDemoReport out;
  out.x = flow_grid(opts.a, opts.b, opts.grid);
  const auto n = static_cast<Eigen::Index>(out.x.size());
  if (u0.size() != n || v.size() != n) throw DimensionMismatch("flow demo: state size must equal grid size");
  if (!(opts.t_max >= opts.t_min) || opts.time_samples < 1) throw InvalidInput("flow demo: invalid time range");
  if (!(opts.energy_level > 0.0)) throw InvalidInput("flow demo: energy level must be positive");
  out.dx = (opts.b - opts.a) / (opts.grid - 1);
  const double u_norm_sq = u0.squaredNorm() * out.dx;
  const double v_norm_sq = v.squaredNorm() * out.dx;
  out.expected_mean = u_norm_sq + v_norm_sq;

  double total = 0.0;
  for (int s = 0; s < opts.time_samples; ++s) {
    const double t = opts.time_samples == 1
                         ? opts.t_min
                         : opts.t_min + (opts.t_max - opts.t_min) * s / (opts.time_samples - 1);
    double dist = 0.0;
    double norm = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::complex<double> moved = std::polar(1.0, t * out.x[static_cast<size_t>(j)]) * u0(j);
      dist += std::norm(moved - v(j));
      norm += std::norm(moved);
    }
    dist *= out.dx;
    norm *= out.dx;
    out.isometry_error = std::max(out.isometry_error, std::abs(std::sqrt(norm) - std::sqrt(u_norm_sq)));
    out.times.push_back(t);
    out.distance_sq.push_back(dist);
    total += dist;
  }
  out.mean_distance_sq = total / opts.time_samples;
  out.relative_deviation =
      out.expected_mean > 0 ? std::abs(out.mean_distance_sq - out.expected_mean) / out.expected_mean : 0.0;

  out.expected_capacity = 2.0 * opts.energy_level * kPi / opts.b;
  if (opts.compute_capacity) {
    // H(u) = ½∫x|u|² dx; with z = (Re u, Im u)·√dx it is ½ zᵀ diag(x, x) z on canonical R^{2N}.
    const auto space = SymplecticSpace::canonical(n);
    Vector diag(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) diag(j) = diag(n + j) = out.x[static_cast<size_t>(j)];
    const ConvexBody level = ellipsoid(Matrix(diag.asDiagonal()) / (2.0 * opts.energy_level), space);
    const auto res = solve_capacity(level, space, opts.solver);
    out.capacity = res.capacity;
    out.capacity_converged = res.converged;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Output helpers

[[nodiscard]] inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const NonSqueezingSweep& sweep) {
  os << "trial,seed,volume,bound,ratio,equality_flag,j_invariance_residual,condition\n";
  for (const auto& r : sweep.rows)
    os << r.trial << ',' << r.seed << ',' << format_double(r.volume) << ',' << format_double(r.bound) << ','
       << format_double(r.ratio) << ',' << (r.equality_flag ? 1 : 0) << ','
       << format_double(r.j_invariance_residual) << ',' << format_double(r.condition) << '\n';
}

inline void write_csv(std::ostream& os, const FlowDemoReport& rep) {
  os << "t,distance_sq,expected_mean,capacity,expected_capacity\n";
  for (size_t i = 0; i < rep.times.size(); ++i)
    os << format_double(rep.times[i]) << ',' << format_double(rep.distance_sq[i]) << ','
       << format_double(rep.expected_mean) << ',' << format_double(rep.capacity) << ','
       << format_double(rep.expected_capacity) << '\n';
}

}  // namespace symcap
