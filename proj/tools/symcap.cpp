// symcap: command-line front end for the capacity solver and experiments.
//
// Exit codes: 0 success / converged / no violation, 1 input error, 2 solver not converged or a
// verification check failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symcap/symcap.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kFailed = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw symcap::InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw symcap::InvalidInput("cannot write " + path);
  out << text;
}

std::string dump(const symcap::json& j) { return j.dump(2) + "\n"; }

struct CapacityArgs {
  std::string spec;
  std::string out;
  symcap::SolverOptions opts;
  bool check_resolution = false;
};

int run_compute_capacity(const CapacityArgs& a) {
  const auto spec = symcap::parse_body_spec(read_file(a.spec), a.spec);
  auto opts = a.opts;
  opts.check_resolution = a.check_resolution;
  const auto result = symcap::solve_capacity(spec.body, spec.space, opts);
  write_text(a.out, dump(symcap::capacity_report(result, spec.source, opts)));
  std::fprintf(stderr, "capacity %.17g  lambda %.17g  stationarity %.3g  energy %.3g  %s\n", result.capacity,
               result.multiplier, result.residual_stationarity(), result.residual_energy(),
               result.converged ? "converged" : "NOT converged");
  return result.converged ? kOk : kFailed;
}

struct VerifyArgs {
  std::string report;
  double stationarity_tol = 1e-4;
  double energy_tol = 1e-4;
  double defect_tol = 1e-4;
  double closure_tol = 1e-2;
  int steps = 2000;
};

int run_verify(const VerifyArgs& a) {
  const std::string text = read_file(a.report);
  symcap::json report;
  try {
    report = symcap::json::parse(text);
  } catch (const symcap::json::parse_error& e) {
    throw symcap::InvalidInput(a.report + ": malformed JSON: " + e.what());
  }
  const auto v = symcap::verify_report(report, a.steps);
  bool all = true;
  auto line = [&](const char* name, double value, double tol) {
    const bool pass = value <= tol;
    all = all && pass;
    std::printf("%-22s %-24.17g <= %-10.3g %s\n", name, value, tol, pass ? "PASS" : "FAIL");
  };
  std::printf("capacity %.17g (period %.17g)\n", v.capacity, 2.0 * v.capacity);
  line("stationarity", v.residual.stationarity, a.stationarity_tol);
  line("energy", v.residual.energy, a.energy_tol);
  line("action-period defect", v.action_period.defect, a.defect_tol * std::max(1.0, v.capacity));
  line("flow closure (L2)", v.closure.l2_distance, a.closure_tol);
  std::printf("%-22s %-24.17g %-13s %s\n", "action", v.action_period.action, "> 0", v.positive_action ? "PASS" : "FAIL");
  all = all && v.positive_action;
  return all ? kOk : kFailed;
}

struct NonSqueezingArgs {
  int dim = 4;
  int k = 1;
  int trials = 1000;
  std::uint64_t seed = 0;
  double magnitude = 1.0;
  std::string subspace = "coordinate";
  std::string out;
};

int run_nonsqueezing(const NonSqueezingArgs& a) {
  if (a.dim < 2 || a.dim % 2 != 0) throw symcap::InvalidInput("--dim must be even and >= 2");
  if (a.k < 1 || 2 * a.k > a.dim) throw symcap::InvalidInput("--k must satisfy 1 <= 2k <= dim");
  const auto sweep = symcap::nonsqueezing_sweep(a.dim / 2, a.k, a.trials, a.seed, a.magnitude, a.subspace == "random");
  std::ostringstream csv;
  symcap::write_csv(csv, sweep);
  write_text(a.out, csv.str());
  std::fprintf(stderr, "trials %d  violations %d  equality-flag mismatches %d  min vol/pi^k %.17g\n", a.trials,
               sweep.violations, sweep.flag_mismatches, sweep.min_ratio);
  return sweep.violations == 0 ? kOk : kFailed;
}

struct FlowArgs {
  symcap::FlowDemoOptions opts;
  std::string v = "shifted";
  std::string out;
};

int run_flow_demo(FlowArgs a) {
  const auto x = symcap::flow_grid(a.opts.a, a.opts.b, a.opts.grid);
  const double mid = 0.5 * (a.opts.a + a.opts.b);
  const double width = 0.1 * (a.opts.b - a.opts.a);
  const auto u0 = symcap::gaussian_state(x, mid, width);
  symcap::ComplexVector v;
  if (a.v == "zero")
    v = symcap::ComplexVector::Zero(u0.size());
  else if (a.v == "same")
    v = u0;
  else
    v = symcap::gaussian_state(x, mid + 0.5 * width, width);
  const auto rep = symcap::multiplication_flow_demo(u0, v, a.opts);
  std::ostringstream csv;
  symcap::write_csv(csv, rep);
  write_text(a.out, csv.str());
  std::fprintf(stderr,
               "mean d^2 %.17g  expected %.17g  rel.dev %.3g  isometry err %.3g  capacity %.17g  expected %.17g\n",
               rep.mean_distance_sq, rep.expected_mean, rep.relative_deviation, rep.isometry_error, rep.capacity,
               rep.expected_capacity);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-variational symplectic capacities of convex bodies"};
  app.require_subcommand(1);

  CapacityArgs cap;
  auto* compute = app.add_subcommand("compute-capacity", "Estimate the capacity of a body given as JSON");
  compute->add_option("spec", cap.spec, "Body specification (JSON)")->required();
  compute->add_option("--modes", cap.opts.modes, "Fourier modes K")->capture_default_str();
  compute->add_option("--grid", cap.opts.grid, "Quadrature points M (>= 4K)")->capture_default_str();
  compute->add_option("--starts", cap.opts.random_starts, "Random starts in addition to coordinate circles")
      ->capture_default_str();
  compute->add_option("--tol", cap.opts.gradient_tolerance, "Relative projected-gradient tolerance")
      ->capture_default_str();
  compute->add_option("--seed", cap.opts.seed, "Seed for random starts")->capture_default_str();
  compute->add_option("--max-iter", cap.opts.max_iterations, "Iteration budget per start")->capture_default_str();
  compute->add_option("--threads", cap.opts.threads, "Worker threads (0: SYMCAP_THREADS or all cores)");
  compute->add_flag("--check-resolution", cap.check_resolution, "Re-solve with 2K modes and flag drift");
  compute->add_option("--out", cap.out, "Output JSON path (default stdout)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify-characteristic", "Re-check the characteristic stored in a result");
  verify->add_option("result", ver.report, "Result JSON from compute-capacity")->required();
  verify->add_option("--stationarity-tol", ver.stationarity_tol)->capture_default_str();
  verify->add_option("--energy-tol", ver.energy_tol)->capture_default_str();
  verify->add_option("--defect-tol", ver.defect_tol)->capture_default_str();
  verify->add_option("--closure-tol", ver.closure_tol)->capture_default_str();
  verify->add_option("--steps", ver.steps, "RK4 steps over one period")->capture_default_str();

  NonSqueezingArgs ns;
  auto* squeeze = app.add_subcommand("nonsqueezing", "Randomised linear non-squeezing sweep");
  squeeze->add_option("--dim", ns.dim, "Ambient dimension 2n")->capture_default_str();
  squeeze->add_option("--k", ns.k, "Half-dimension of the target subspace")->capture_default_str();
  squeeze->add_option("--trials", ns.trials)->capture_default_str();
  squeeze->add_option("--seed", ns.seed)->capture_default_str();
  squeeze->add_option("--magnitude", ns.magnitude, "Scale of the random Hamiltonian generator (0: identity)")
      ->capture_default_str();
  squeeze->add_option("--subspace", ns.subspace, "coordinate | random")
      ->check(CLI::IsMember({"coordinate", "random"}))
      ->capture_default_str();
  squeeze->add_option("--out", ns.out, "Output CSV path (default stdout)");

  FlowArgs fl;
  auto* flow = app.add_subcommand("l2flow-demo", "Truncated multiplication-operator flow on L2(a,b)");
  flow->add_option("--a", fl.opts.a)->capture_default_str();
  flow->add_option("--b", fl.opts.b)->capture_default_str();
  flow->add_option("--grid", fl.opts.grid, "Spatial grid points N")->capture_default_str();
  flow->add_option("--tmin", fl.opts.t_min)->capture_default_str();
  flow->add_option("--tmax", fl.opts.t_max)->capture_default_str();
  flow->add_option("--samples", fl.opts.time_samples, "Time samples")->capture_default_str();
  flow->add_option("--level", fl.opts.energy_level, "Energy level c of {H <= c}")->capture_default_str();
  flow->add_option("--v", fl.v, "Comparison state: shifted | same | zero")
      ->check(CLI::IsMember({"shifted", "same", "zero"}))
      ->capture_default_str();
  flow->add_option("--modes", fl.opts.solver.modes, "Fourier modes for the capacity solve")->capture_default_str();
  flow->add_option("--quad", fl.opts.solver.grid, "Quadrature points for the capacity solve")->capture_default_str();
  flow->add_option("--out", fl.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*compute) return run_compute_capacity(cap);
    if (*verify) return run_verify(ver);
    if (*squeeze) return run_nonsqueezing(ns);
    if (*flow) return run_flow_demo(fl);
  } catch (const symcap::InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}
