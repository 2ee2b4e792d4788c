#pragma once

#include <functional>

#include "symcap/closed_curve.hpp"
#include "symcap/convex_body.hpp"

namespace symcap {

using GradientOracle = std::function<Vector(const Vector&)>;

struct Trajectory {
  double period = 0.0;
  Matrix states;  // d × (steps+1), column i at time i·T/steps
};

/// RK4 integration of the Hamiltonian vector field ẋ = -Ω^{-1}∇H(x) (= J∇H in canonical
/// coordinates) with `steps` fixed steps over [0, T].
[[nodiscard]] inline Trajectory hamiltonian_flow(const GradientOracle& grad_h, const Vector& x0, double period,
                                                 int steps, const SymplecticSpace& space) {
  space.require_dim(x0.size(), "hamiltonian_flow");
  if (steps < 1) throw InvalidInput("hamiltonian_flow needs steps >= 1");
  if (!std::isfinite(period)) throw InvalidInput("hamiltonian_flow: non-finite period");
  const Matrix field = -space.omega_inverse();
  auto f = [&](const Vector& x) { return Vector(field * grad_h(x)); };
  const double h = period / steps;
  Trajectory out;
  out.period = period;
  out.states.resize(x0.size(), steps + 1);
  out.states.col(0) = x0;
  Vector x = x0;
  for (int i = 0; i < steps; ++i) {
    const Vector k1 = f(x);
    const Vector k2 = f(x + 0.5 * h * k1);
    const Vector k3 = f(x + 0.5 * h * k2);
    const Vector k4 = f(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw NumericalFailure("hamiltonian_flow: trajectory became non-finite");
    out.states.col(i + 1) = x;
  }
  return out;
}

/// Flow of H_C = ½μ_C².
[[nodiscard]] inline Trajectory hamiltonian_flow(const ConvexBody& body, const Vector& x0, double period, int steps,
                                                 const SymplecticSpace& space) {
  return hamiltonian_flow([&body](const Vector& x) { return body.hamiltonian_gradient(x); }, x0, period, steps, space);
}

struct CharacteristicResidual {
  double stationarity = 0.0;  // L² norm (dual metric) of -Ωẋ - 2c·dH_C(x)
  double energy = 0.0;        // max |H_C(x) - ½|
};

/// Residuals of a unit-period loop x against the characteristic equation -Ωẋ = 2c·dH_C(x) on ∂C.
[[nodiscard]] inline CharacteristicResidual characteristic_residual(const ClosedCurve& x, double c,
                                                                    const ConvexBody& body,
                                                                    const SymplecticSpace& space) {
  space.require_dim(x.dim(), "characteristic_residual");
  if (body.dim() != x.dim()) throw DimensionMismatch("characteristic_residual: body dimension");
  const SpectralGrid grid(x.modes(), x.grid());
  const Matrix pts = x.samples(grid);
  const Matrix vel = x.derivative_samples(grid);
  CharacteristicResidual r;
  double sq = 0.0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vector p = pts.col(j);
    const double mu = body.gauge(p);
    const Vector defect = -space.omega() * vel.col(j) - 2.0 * c * mu * body.gauge_gradient(p);
    const double n = space.dual_norm(defect);
    sq += n * n;
    r.energy = std::max(r.energy, std::abs(0.5 * mu * mu - 0.5));
  }
  r.stationarity = std::sqrt(sq / static_cast<double>(pts.cols()));
  return r;
}

struct ActionPeriod {
  double action = 0.0;
  double half_period = 0.0;
  double defect = 0.0;
};

/// For a loop y (stored with unit period) that solves -Ωẏ = dH_C(y) with period T, the Euler
/// identity forces 𝔸(y) = T/2.
[[nodiscard]] inline ActionPeriod action_period_check(const ClosedCurve& y, double period,
                                                      const SymplecticSpace& space) {
  ActionPeriod out;
  out.action = action(y, space);
  out.half_period = 0.5 * period;
  out.defect = std::abs(out.action - out.half_period);
  return out;
}

struct FlowClosure {
  double l2_distance = 0.0;      // sqrt(mean_i ‖φ_{iT/N}(x(0)) - x(i/N)‖²)
  double return_distance = 0.0;  // ‖φ_T(x(0)) - x(0)‖
  double energy_drift = 0.0;     // max_i |H_C(φ) - H_C(x(0))|
};

/// Integrates the flow of H_C from x(0) for time T and compares with the loop sampled at t = s/T.
[[nodiscard]] inline FlowClosure flow_closure_distance(const ClosedCurve& x, double period, const ConvexBody& body,
                                                       const SymplecticSpace& space, int steps = 2000) {
  const Vector x0 = x(0.0);
  const Trajectory traj = hamiltonian_flow(body, x0, period, steps, space);
  FlowClosure out;
  const double h0 = body.hamiltonian(x0);
  double sq = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const Vector s = traj.states.col(i);
    const double n = space.norm(s - x(static_cast<double>(i) / steps));
    if (i < steps) sq += n * n;
    out.energy_drift = std::max(out.energy_drift, std::abs(body.hamiltonian(s) - h0));
  }
  out.l2_distance = std::sqrt(sq / steps);
  out.return_distance = space.norm(traj.states.col(steps) - x0);
  return out;
}

}  // namespace symcap
