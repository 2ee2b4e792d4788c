#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <exception>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "symcap/characteristics.hpp"
#include "symcap/closed_curve.hpp"
#include "symcap/convex_body.hpp"

namespace symcap {

struct SolverOptions {
  int modes = 16;
  int grid = 128;
  int max_iterations = 5000;
  double gradient_tolerance = 1e-8;  // relative to max(1, capacity)
  int random_starts = 2;
  std::uint64_t seed = 0;
  double capacity_tolerance = 1e-3;
  double energy_tolerance = 1e-3;
  int memory = 8;              // L-BFGS pairs
  double armijo = 1e-4;
  int threads = 0;             // 0: SYMCAP_THREADS or hardware concurrency
  bool check_resolution = false;

  void validate() const {
    if (modes < 1) throw InvalidInput("modes must be >= 1");
    if (grid < 4 * modes) throw InvalidInput("grid must satisfy M >= 4K");
    if (max_iterations < 0) throw InvalidInput("max_iterations must be >= 0");
    if (!(gradient_tolerance > 0.0) || !(capacity_tolerance > 0.0) || !(energy_tolerance > 0.0))
      throw InvalidInput("tolerances must be positive");
    if (random_starts < 0) throw InvalidInput("random_starts must be >= 0");
    if (memory < 1) throw InvalidInput("memory must be >= 1");
  }
};

struct Characteristic {
  ClosedCurve curve = ClosedCurve::zero(1, 1, 4);  // unit-period loop on ∂C
  Vector baseline_shift;                            // Du Bois-Reymond constant ȳ
  double energy = 0.0;                              // mean H_C of the unnormalised y
  double residual_stationarity = 0.0;
  double residual_energy = 0.0;
};

struct CapacityResult {
  double capacity = 0.0;
  ClosedCurve certificate = ClosedCurve::zero(1, 1, 4);  // ξ with 𝔸*(ξ) = 1
  double multiplier = 0.0;                                // λ = 1/c
  Characteristic characteristic;
  double projected_gradient_norm = 0.0;
  double a_p_spread = 0.0;
  bool converged = false;
  bool under_resolved = false;
  double refined_capacity = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  int best_start = -1;
  std::vector<double> start_capacities;
  std::vector<double> history;  // quotient at each accepted step of the winning start
  std::vector<double> mode_energy;
  int modes = 0;
  int grid = 0;
  double smoothing = 0.0;

  [[nodiscard]] double residual_stationarity() const { return characteristic.residual_stationarity; }
  [[nodiscard]] double residual_energy() const { return characteristic.residual_energy; }
  [[nodiscard]] const Vector& baseline_shift() const { return characteristic.baseline_shift; }
};

/// Φ_C(ξ) = ½∫H_{C^0}(ξ̇) = ¼∫h_C(ξ̇)², trapezoid rule on the curve's grid.
[[nodiscard]] inline double clarke_functional(const ClosedCurve& xi, const ConvexBody& body,
                                              const SymplecticSpace& space) {
  space.require_dim(xi.dim(), "clarke_functional");
  if (body.dim() != xi.dim()) throw DimensionMismatch("clarke_functional: body dimension");
  const Matrix vel = xi.derivative_samples();
  double s = 0.0;
  for (Eigen::Index j = 0; j < vel.cols(); ++j) {
    const double h = body.support(vel.col(j));
    s += h * h;
  }
  return 0.25 * s / static_cast<double>(vel.cols());
}

/// Gradient of Φ_C with respect to the coefficient matrix: ½·mean_j dH_{C^0}(ξ̇_j) ⊗ ∂_c ξ̇_j.
[[nodiscard]] inline Matrix clarke_gradient(const ClosedCurve& xi, const ConvexBody& body,
                                            const SymplecticSpace& space) {
  space.require_dim(xi.dim(), "clarke_gradient");
  if (body.dim() != xi.dim()) throw DimensionMismatch("clarke_gradient: body dimension");
  const SpectralGrid grid(xi.modes(), xi.grid());
  const Matrix vel = xi.derivative_samples(grid);
  Matrix dh(vel.rows(), vel.cols());
  for (Eigen::Index j = 0; j < vel.cols(); ++j) dh.col(j) = body.dual_hamiltonian_gradient(vel.col(j));
  return 0.5 / static_cast<double>(vel.cols()) * dh * grid.derivatives.transpose();
}

namespace detail {

/// Φ_C/𝔸* on band-limited loops in preconditioned coordinates z: coefficient pair k is z_k/(√2·πk),
/// which makes the H¹ seminorm Euclidean. The constant mode is dropped (Φ_C and 𝔸* ignore it).
class DualProblem {
 public:
  DualProblem(const ConvexBody& body, const SymplecticSpace& space, int modes, int grid)
      : body_(body), space_(space), grid_(modes, grid), d_(space.dim()), k_(modes) {
    scale_.resize(2 * modes);
    for (int k = 1; k <= modes; ++k) scale_(2 * k - 2) = scale_(2 * k - 1) = 1.0 / (std::sqrt(2.0) * kPi * k);
  }

  struct Eval {
    double phi = 0.0;
    double astar = 0.0;
    double quotient = std::numeric_limits<double>::infinity();
    Vector grad;  // gradient of the quotient in z
  };

  [[nodiscard]] Eigen::Index size() const { return d_ * 2 * k_; }
  [[nodiscard]] const SpectralGrid& grid() const { return grid_; }

  [[nodiscard]] Matrix coefficients(const Vector& z) const {
    Matrix c = Matrix::Zero(d_, 2 * k_ + 1);
    c.rightCols(2 * k_) = Eigen::Map<const Matrix>(z.data(), d_, 2 * k_) * scale_.asDiagonal();
    return c;
  }

  [[nodiscard]] Vector to_z(const Matrix& coeffs) const {
    Matrix z = coeffs.rightCols(2 * k_) * scale_.cwiseInverse().asDiagonal();
    return Eigen::Map<const Vector>(z.data(), z.size());
  }

  [[nodiscard]] double dual_action_of(const Vector& z) const {
    return dual_action(ClosedCurve(coefficients(z), grid_.points), space_);
  }

  [[nodiscard]] Eval evaluate(const Vector& z, bool with_gradient = true) const {
    Eval e;
    const Matrix c = coefficients(z);
    e.astar = dual_action(ClosedCurve(c, grid_.points), space_);
    const Matrix vel = c * grid_.derivatives;
    const auto m = vel.cols();
    Matrix dh(d_, m);
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vector v = vel.col(j);
      const double h = body_.support(v);
      s += h * h;
      if (with_gradient) dh.col(j) = h * body_.support_gradient(v);
    }
    e.phi = 0.25 * s / static_cast<double>(m);
    if (!(e.astar > 0.0)) return e;
    e.quotient = e.phi / e.astar;
    if (with_gradient) {
      const Matrix gphi = 0.5 / static_cast<double>(m) * dh * grid_.derivatives.transpose();
      const Matrix ga = dual_action_gradient(c, space_);
      const Matrix gq = ((gphi - e.quotient * ga) / e.astar).rightCols(2 * k_) * scale_.asDiagonal();
      e.grad = Eigen::Map<const Vector>(gq.data(), gq.size());
    }
    return e;
  }

 private:
  const ConvexBody& body_;
  const SymplecticSpace& space_;
  SpectralGrid grid_;
  Eigen::Index d_;
  int k_;
  Vector scale_;
};

struct StartOutcome {
  Vector z;
  double quotient = std::numeric_limits<double>::infinity();
  double gradient_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
};

/// L-BFGS with Armijo backtracking on the quotient; iterates are renormalised onto 𝔸* = 1.
[[nodiscard]] inline StartOutcome minimize_quotient(const DualProblem& problem, Vector z, const SolverOptions& opts) {
  StartOutcome out;
  {
    const double a = problem.dual_action_of(z);
    if (!(a > 0.0)) throw NumericalFailure("starting loop has non-positive dual action");
    z /= std::sqrt(a);
  }
  auto current = problem.evaluate(z);
  out.history.push_back(current.quotient);
  std::deque<std::pair<Vector, Vector>> memory;
  int flat_steps = 0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double gnorm = current.grad.norm();
    if (gnorm <= opts.gradient_tolerance * std::max(1.0, current.quotient)) break;

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Vector p;
      if (memory.empty()) {
        p = -current.grad * std::min(1.0, 0.1 * z.norm() / gnorm);
      } else {
        // two-loop recursion
        Vector q = current.grad;
        std::vector<double> alpha(memory.size());
        for (size_t i = memory.size(); i-- > 0;) {
          const auto& [s, y] = memory[i];
          alpha[i] = s.dot(q) / y.dot(s);
          q -= alpha[i] * y;
        }
        const auto& [s_last, y_last] = memory.back();
        q *= s_last.dot(y_last) / y_last.squaredNorm();
        for (size_t i = 0; i < memory.size(); ++i) {
          const auto& [s, y] = memory[i];
          const double beta = y.dot(q) / y.dot(s);
          q += (alpha[i] - beta) * s;
        }
        p = -q;
        if (!(p.dot(current.grad) < 0.0)) {
          memory.clear();
          continue;
        }
      }
      const double slope = p.dot(current.grad);
      double step = 1.0;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        Vector trial = z + step * p;
        const double a = problem.dual_action_of(trial);
        if (!(a > 0.0)) continue;
        trial /= std::sqrt(a);
        auto next = problem.evaluate(trial);
        if (!(next.quotient <= current.quotient + opts.armijo * step * slope)) continue;
        const Vector s = trial - z;
        const Vector y = next.grad - current.grad;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
          memory.emplace_back(s, y);
          if (static_cast<int>(memory.size()) > opts.memory) memory.pop_front();
        }
        const double drop = current.quotient - next.quotient;
        flat_steps = drop <= 1e-15 * std::abs(current.quotient) ? flat_steps + 1 : 0;
        z = std::move(trial);
        current = std::move(next);
        out.history.push_back(current.quotient);
        accepted = true;
        break;
      }
      if (!accepted) memory.clear();
    }
    if (!accepted || flat_steps >= 20) {
      ++it;
      break;
    }
  }
  out.z = std::move(z);
  out.quotient = current.quotient;
  out.gradient_norm = current.grad.norm();
  out.iterations = it;
  return out;
}

[[nodiscard]] inline int resolve_threads(int requested, int jobs) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("SYMCAP_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min(n, jobs));
}

}  // namespace detail

/// Starting loops: one dual circle per coordinate direction e_1..e_n, then `random_starts`
/// random dual circles with small seeded higher-mode perturbations.
[[nodiscard]] inline std::vector<ClosedCurve> starting_loops(const SymplecticSpace& space, const SolverOptions& opts) {
  std::vector<ClosedCurve> starts;
  const auto d = space.dim();
  for (Eigen::Index i = 0; i < space.half_dim(); ++i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    starts.push_back(dual_circle(e, space, opts.modes, opts.grid));
  }
  for (int s = 0; s < opts.random_starts; ++s) {
    std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(s) + 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector xi0(d);
    for (auto& v : xi0) v = normal(rng);
    Matrix c = dual_circle(xi0 / space.dual_norm(xi0), space, opts.modes, opts.grid).coefficients();
    for (Eigen::Index col = 1; col < c.cols(); ++col)
      for (Eigen::Index r = 0; r < d; ++r) c(r, col) += 0.05 * normal(rng) / static_cast<double>((col + 1) / 2);
    starts.emplace_back(std::move(c), opts.grid);
  }
  return starts;
}

/// Uses the Du Bois-Reymond identity -Ω^{-1}ξ + ȳ = (λ/2) dH_{C^0}(ξ̇) to turn a (near-)minimiser ξ
/// with multiplier λ into a loop on ∂C.
[[nodiscard]] inline Characteristic reconstruct_characteristic(const ClosedCurve& xi, double multiplier,
                                                               const ConvexBody& body,
                                                               const SymplecticSpace& space) {
  space.require_dim(xi.dim(), "reconstruct_characteristic");
  if (!(multiplier > 0.0) || !std::isfinite(multiplier))
    throw ReconstructionFailed("multiplier must be positive and finite");
  const SpectralGrid grid(xi.modes(), xi.grid());
  const Matrix pts = xi.samples(grid);
  const Matrix vel = xi.derivative_samples(grid);
  const Matrix& winv = space.omega_inverse();
  Vector ybar = Vector::Zero(xi.dim());
  for (Eigen::Index j = 0; j < pts.cols(); ++j)
    ybar += 0.5 * multiplier * body.dual_hamiltonian_gradient(vel.col(j)) + winv * pts.col(j);
  ybar /= static_cast<double>(pts.cols());

  Matrix yc = -winv * xi.coefficients();
  yc.col(0) += ybar;
  const ClosedCurve y(yc, xi.grid());
  const Matrix ys = y.samples(grid);
  double energy = 0.0;
  for (Eigen::Index j = 0; j < ys.cols(); ++j) energy += body.hamiltonian(ys.col(j));
  energy /= static_cast<double>(ys.cols());
  if (!(energy > 0.0) || !std::isfinite(energy)) throw ReconstructionFailed("reconstructed loop has no energy");

  Characteristic out;
  out.curve = y.scaled(1.0 / std::sqrt(2.0 * energy));
  out.baseline_shift = ybar;
  out.energy = energy;
  const auto res = characteristic_residual(out.curve, 1.0 / multiplier, body, space);
  out.residual_stationarity = res.stationarity;
  out.residual_energy = res.energy;
  return out;
}

/// Time change making h_C(η̇) constant: η(s) = ξ(τ(s)) with τ the inverse of the normalised
/// cumulative h_C-length, computed spectrally on a fine grid and re-projected onto the curve's modes.
[[nodiscard]] inline ClosedCurve arc_reparametrize(const ClosedCurve& xi, const ConvexBody& body, int samples = 0) {
  if (body.dim() != xi.dim()) throw DimensionMismatch("arc_reparametrize: body dimension");
  const int n = samples > 0 ? samples : std::max(8 * xi.modes(), xi.grid()) * 4;
  const SpectralGrid fine(xi.modes(), n);
  const Matrix vel = xi.derivative_samples(fine);
  Vector speed(n);
  for (int j = 0; j < n; ++j) speed(j) = body.support(vel.col(j));
  const double floor = 1e-12 * std::max(1e-300, speed.maxCoeff());
  if (speed.minCoeff() <= floor) throw InvalidInput("arc_reparametrize: loop has vanishing speed");

  // speed(t) = L + Σ α_q cos 2πqt + β_q sin 2πqt
  const int q_max = (n - 1) / 2;
  const SpectralGrid basis(q_max, n);
  const Vector coef = basis.values * speed * (2.0 / n);
  const double length = 0.5 * coef(0);
  auto cumulative = [&](double t) {
    double s = length * t;
    for (int q = 1; q <= q_max; ++q) {
      const double w = 2.0 * kPi * q;
      s += coef(2 * q - 1) * std::sin(w * t) / w - coef(2 * q) * (std::cos(w * t) - 1.0) / w;
    }
    return s / length;
  };
  auto rate = [&](double t) {
    double v = length;
    for (int q = 1; q <= q_max; ++q) {
      const double w = 2.0 * kPi * q;
      v += coef(2 * q - 1) * std::cos(w * t) + coef(2 * q) * std::sin(w * t);
    }
    return v / length;
  };

  Matrix eta(xi.dim(), n);
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double target = static_cast<double>(i) / n;
    double lo = prev;
    double hi = 1.0;
    double t = std::clamp(target, lo, hi);
    for (int it = 0; it < 100; ++it) {
      const double f = cumulative(t) - target;
      if (std::abs(f) < 1e-15) break;
      if (f > 0)
        hi = t;
      else
        lo = t;
      const double r = rate(t);
      double next = r > 0 ? t - f / r : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo < 1e-16) break;
      t = next;
    }
    prev = t;
    eta.col(i) = xi(t);
  }
  return ClosedCurve::from_samples(eta, xi.modes(), xi.grid());
}

/// ‖h_C(ξ̇)‖_∞² − ‖h_C(ξ̇)‖_2² on the curve's grid (zero iff the h_C-speed is constant).
[[nodiscard]] inline double speed_spread(const ClosedCurve& xi, const ConvexBody& body) {
  const Matrix vel = xi.derivative_samples();
  double mx = 0.0;
  double sq = 0.0;
  for (Eigen::Index j = 0; j < vel.cols(); ++j) {
    const double h = body.support(vel.col(j));
    mx = std::max(mx, h);
    sq += h * h;
  }
  return mx * mx - sq / static_cast<double>(vel.cols());
}

namespace detail {

inline void finish_result(CapacityResult& r, const DualProblem& problem, const StartOutcome& best,
                          const ConvexBody& body, const SymplecticSpace& space, const SolverOptions& opts) {
  r.certificate = ClosedCurve(problem.coefficients(best.z), opts.grid);
  r.capacity = best.quotient;
  r.multiplier = 1.0 / best.quotient;
  r.projected_gradient_norm = best.gradient_norm;
  r.iterations = best.iterations;
  r.history = best.history;
  r.mode_energy = r.certificate.mode_energy();
  r.modes = opts.modes;
  r.grid = opts.grid;
  r.smoothing = body.smoothing();
  r.characteristic = reconstruct_characteristic(r.certificate, r.multiplier, body, space);
  try {
    r.a_p_spread = speed_spread(arc_reparametrize(r.certificate, body), body);
  } catch (const InvalidInput&) {
    r.a_p_spread = std::numeric_limits<double>::infinity();
  }
  r.converged = r.projected_gradient_norm <= opts.gradient_tolerance * std::max(1.0, r.capacity) &&
                r.characteristic.residual_energy <= opts.energy_tolerance;
}

}  // namespace detail

/// Minimises Φ_C/𝔸* from a single starting loop (its modes and grid must match the options).
[[nodiscard]] inline CapacityResult solve_capacity_from(const ConvexBody& body, const SymplecticSpace& space,
                                                        const ClosedCurve& start, const SolverOptions& opts) {
  opts.validate();
  space.require_dim(body.dim(), "solve_capacity_from");
  const ClosedCurve init = start.modes() == opts.modes && start.grid() == opts.grid
                               ? start
                               : start.with_modes(opts.modes, opts.grid);
  const detail::DualProblem problem(body, space, opts.modes, opts.grid);
  const auto best = detail::minimize_quotient(problem, problem.to_z(init.coefficients()), opts);
  CapacityResult r;
  r.best_start = 0;
  r.start_capacities = {best.quotient};
  detail::finish_result(r, problem, best, body, space, opts);
  return r;
}

/// Estimates c(C) = min Φ_C/𝔸* over band-limited loops by multi-started L-BFGS. The value is an
/// upper bound for the capacity up to quadrature error in Φ_C.
[[nodiscard]] inline CapacityResult solve_capacity(const ConvexBody& body, const SymplecticSpace& space,
                                                   const SolverOptions& opts = {}) {
  opts.validate();
  space.require_dim(body.dim(), "solve_capacity");
  const auto starts = starting_loops(space, opts);
  const detail::DualProblem problem(body, space, opts.modes, opts.grid);
  std::vector<detail::StartOutcome> outcomes(starts.size());
  std::vector<std::exception_ptr> errors(starts.size());
  auto run = [&](size_t i) {
    try {
      outcomes[i] = detail::minimize_quotient(problem, problem.to_z(starts[i].coefficients()), opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const int nthreads = detail::resolve_threads(opts.threads, static_cast<int>(starts.size()));
  if (nthreads == 1) {
    for (size_t i = 0; i < starts.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (size_t i = next++; i < starts.size(); i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }

  CapacityResult r;
  for (size_t i = 0; i < starts.size(); ++i) {
    r.start_capacities.push_back(outcomes[i].quotient);
    if (!errors[i] && outcomes[i].quotient < std::numeric_limits<double>::infinity() &&
        (r.best_start < 0 || outcomes[i].quotient < outcomes[static_cast<size_t>(r.best_start)].quotient))
      r.best_start = static_cast<int>(i);
  }
  if (r.best_start < 0) {
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    throw NumericalFailure("no start reached positive dual action");
  }
  detail::finish_result(r, problem, outcomes[static_cast<size_t>(r.best_start)], body, space, opts);

  if (opts.check_resolution) {
    SolverOptions fine = opts;
    fine.modes = 2 * opts.modes;
    fine.grid = 2 * opts.grid;
    fine.check_resolution = false;
    const auto refined = solve_capacity_from(body, space, r.certificate.with_modes(fine.modes, fine.grid), fine);
    r.refined_capacity = refined.capacity;
    r.under_resolved = std::abs(refined.capacity - r.capacity) > opts.capacity_tolerance;
  }
  return r;
}

}  // namespace symcap
