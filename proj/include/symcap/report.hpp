#pragma once

#include <string>

#include "symcap/body_spec.hpp"
#include "symcap/dual_solver.hpp"

namespace symcap {

[[nodiscard]] inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[nodiscard]] inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (const double x : v) out.push_back(x);
  return out;
}

[[nodiscard]] inline Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) throw InvalidInput("expected an array of rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != rows[0].size()) throw InvalidInput("ragged matrix");
    for (size_t j = 0; j < rows[i].size(); ++j) {
      if (!rows[i][j].is_number()) throw InvalidInput("matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

[[nodiscard]] inline json curve_to_json(const ClosedCurve& c, bool with_samples) {
  json out{{"modes", c.modes()}, {"grid", c.grid()}, {"coefficients", matrix_to_json(c.coefficients())}};
  if (with_samples) out["samples"] = matrix_to_json(c.samples().transpose());
  return out;
}

[[nodiscard]] inline ClosedCurve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coefficients") || !j.contains("grid") || !j["grid"].is_number_integer())
    throw InvalidInput("curve needs \"coefficients\" and integer \"grid\"");
  return ClosedCurve(matrix_from_json(j["coefficients"]), j["grid"].get<int>());
}

/// Machine-readable capacity report. The body specification is embedded so the file alone
/// determines a re-check.
[[nodiscard]] inline json capacity_report(const CapacityResult& r, const json& body_spec, const SolverOptions& opts) {
  json out;
  out["body"] = body_spec;
  out["capacity"] = r.capacity;
  out["lambda"] = r.multiplier;
  out["modes"] = r.modes;
  out["grid"] = r.grid;
  out["epsilon"] = r.smoothing;
  out["converged"] = r.converged;
  out["under_resolved"] = r.under_resolved;
  if (std::isfinite(r.refined_capacity)) out["refined_capacity"] = r.refined_capacity;
  out["iterations"] = r.iterations;
  out["best_start"] = r.best_start;
  out["start_capacities"] = r.start_capacities;
  out["residuals"] = {{"stationarity", r.residual_stationarity()},
                      {"energy", r.residual_energy()},
                      {"projected_gradient", r.projected_gradient_norm},
                      {"a_p_spread", r.a_p_spread}};
  out["baseline_shift"] = vector_to_json(r.baseline_shift());
  out["mode_energy"] = r.mode_energy;
  out["options"] = {{"modes", opts.modes},
                    {"grid", opts.grid},
                    {"max_iterations", opts.max_iterations},
                    {"gradient_tolerance", opts.gradient_tolerance},
                    {"random_starts", opts.random_starts},
                    {"seed", opts.seed},
                    {"capacity_tolerance", opts.capacity_tolerance},
                    {"energy_tolerance", opts.energy_tolerance}};
  out["certificate"] = curve_to_json(r.certificate, false);
  out["characteristic"] = curve_to_json(r.characteristic.curve, true);
  return out;
}

struct VerificationReport {
  double capacity = 0.0;
  CharacteristicResidual residual;
  ActionPeriod action_period;
  FlowClosure closure;
  bool positive_action = false;
};

/// Recomputes characteristic diagnostics from a capacity report.
[[nodiscard]] inline VerificationReport verify_report(const json& report, int flow_steps = 2000) {
  for (const char* key : {"body", "capacity", "characteristic"})
    if (!report.contains(key)) throw InvalidInput(std::string("report is missing \"") + key + "\"");
  if (!report["capacity"].is_number()) throw InvalidInput("\"capacity\" must be a number");
  const auto spec = parse_body_spec(report["body"].dump(), "report body");
  VerificationReport out;
  out.capacity = report["capacity"].get<double>();
  if (!(out.capacity > 0.0)) throw InvalidInput("\"capacity\" must be positive");
  const ClosedCurve x = curve_from_json(report["characteristic"]);
  if (x.dim() != spec.space.dim()) throw InvalidInput("characteristic dimension does not match the body");
  out.residual = characteristic_residual(x, out.capacity, spec.body, spec.space);
  out.action_period = action_period_check(x, 2.0 * out.capacity, spec.space);
  out.positive_action = out.action_period.action > 0.0;
  out.closure = flow_closure_distance(x, 2.0 * out.capacity, spec.body, spec.space, flow_steps);
  return out;
}

}  // namespace symcap
