#include "cli_app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "entrain/entrain.hpp"

namespace entrain::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Option values as typed on the command line; unset ones fall back to the scenario preset.
struct CommonArgs {
  std::string scenario;
  std::optional<double> k;
  std::optional<std::string> input;
  std::optional<std::string> x0;
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<std::string> method;
  std::string out_dir;
};

struct SimulateArgs {
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::optional<double> grid_step;
  std::optional<std::string> manifest;
};

struct LyapunovArgs {
  std::optional<std::string> system;
  LyapunovOptions opts;
};

struct MonteCarloArgs {
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  double horizon = 200.0;
  double range_lo = -10.0;
  double range_hi = 10.0;
};

struct FreqRespArgs {
  double omega_min = 1e-2;
  double omega_max = 1e2;
  int points_per_decade = 5;
  std::vector<double> omegas;
  double tol = 1e-12;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("ENTRAIN_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

void add_common(CLI::App* cmd, CommonArgs& a, const std::string& default_scenario) {
  a.scenario = default_scenario;
  cmd->add_option("--scenario", a.scenario, "Scenario preset (example1, example2, interp-lorenz, general, lorenz)")
      ->capture_default_str();
  cmd->add_option("--K", a.k, "Saturation parameter K of alpha(y) = y^2/(K+y^2)");
  cmd->add_option("--input", a.input, "Input spec: const:<c> | sin:<amp>:<omega>[:<phase>] | file:<path>");
  cmd->add_option("--x0", a.x0, "Comma-separated initial state in layout order");
  cmd->add_option("--rel-tol", a.rel_tol, "Relative tolerance of the adaptive integrator");
  cmd->add_option("--abs-tol", a.abs_tol, "Absolute tolerance of the adaptive integrator");
  cmd->add_option("--method", a.method, "rk45_adaptive (default) or rk4_fixed");
  a.out_dir = default_out_dir();
  cmd->add_option("--out-dir", a.out_dir, "Output directory (default $ENTRAIN_OUT_DIR or .)");
}

std::vector<double> parse_vector(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw ParameterError(std::string(what) + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError(std::string(what) + " is empty");
  return out;
}

/// Preset defaults overridden by whatever the user passed.
ScenarioSpec resolve_spec(const CommonArgs& a) {
  auto spec = ScenarioSpec::from_preset(a.scenario);
  if (a.k) spec.k = *a.k;
  if (a.input) spec.input_spec = *a.input;
  if (a.x0) spec.x0 = parse_vector(*a.x0, "--x0");
  if (a.rel_tol) spec.integrator.rel_tol = *a.rel_tol;
  if (a.abs_tol) spec.integrator.abs_tol = *a.abs_tol;
  if (a.method) spec.integrator.method = parse_method(*a.method);
  return spec;
}

int cmd_simulate(const CommonArgs& common, const SimulateArgs& a, std::ostream& out) {
  ScenarioSpec spec;
  if (a.manifest) {
    std::ifstream in(*a.manifest);
    if (!in) throw ParameterError("cannot read manifest '" + *a.manifest + "'");
    json m;
    try {
      m = json::parse(in);
    } catch (const json::exception& e) {
      throw ParameterError(std::string("manifest is not valid JSON: ") + e.what());
    }
    spec = spec_from_manifest(m);
  } else {
    spec = resolve_spec(common);
    if (a.t_start) spec.t_span.start = *a.t_start;
    if (a.t_end) spec.t_span.end = *a.t_end;
    if (a.grid_step) spec.output_grid_step = *a.grid_step;
  }
  spec.validate();

  const auto input = parse_input_spec(spec.input_spec);
  const auto sys = make_scenario_system(spec.scenario_id, spec.k);
  auto traj = integrate(sys, input, spec.x0, spec.t_span, spec.integrator,
                        OutputGrid::uniform(spec.t_span, spec.output_grid_step));
  traj.set_input_spec(spec.input_spec);

  json report{{"scenario_id", spec.scenario_id}, {"input_spec", spec.input_spec}, {"K", spec.k}};
  if (spec.t_span.end - spec.t_span.start >= 10.0) {
    const auto steady = detect_steady_state(traj);
    report.update(json(steady));
    json tails = json::array();
    for (const auto& name : traj.columns()) tails.push_back(tail_stats(traj, name));
    report["tail_stats"] = tails;
  } else {
    report["converged"] = nullptr;
    report["note"] = "time span shorter than 10 units; steady-state detection skipped";
  }

  const fs::path dir = common.out_dir;
  const auto csv_path = dir / (spec.scenario_id + ".trajectory.csv");
  const auto report_path = dir / (spec.scenario_id + ".report.json");
  const auto manifest_path = dir / (spec.scenario_id + ".manifest.json");
  write_csv(traj, csv_path);
  write_text_file(report_path, report.dump(2) + "\n");
  write_text_file(manifest_path, make_manifest(spec).dump(2) + "\n");

  out << "trajectory: " << csv_path.string() << "\n"
      << "report: " << report_path.string() << "\n"
      << "manifest: " << manifest_path.string() << "\n";
  if (report["converged"].is_boolean())
    out << "converged: " << (report["converged"].get<bool>() ? "true" : "false") << "\n";
  return kOk;
}

int cmd_lyapunov(CommonArgs common, const LyapunovArgs& a, std::ostream& out) {
  if (a.system) {
    if (*a.system != "lorenz") throw ParameterError("--system supports only 'lorenz'");
    common.scenario = "lorenz";
  }
  auto spec = resolve_spec(common);
  spec.validate();
  const auto sys = make_scenario_system(spec.scenario_id, spec.k);
  const auto input = parse_input_spec(spec.input_spec);
  const auto est = lyapunov_max(sys, input, spec.x0, spec.integrator, a.opts);
  json j(est);
  j["scenario_id"] = spec.scenario_id;
  j["input_spec"] = spec.input_spec;
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_montecarlo(const CommonArgs& common, const MonteCarloArgs& a, std::ostream& out) {
  auto spec = resolve_spec(common);
  spec.validate();
  const auto sys = make_scenario_system(spec.scenario_id, spec.k);
  MonteCarloOptions opts;
  opts.range_lo = a.range_lo;
  opts.range_hi = a.range_hi;
  opts.jobs = a.jobs;
  opts.verdict.horizon = a.horizon;
  const auto rows = monte_carlo(sys, a.n, a.seed, spec.integrator, opts);

  std::string text;
  for (const auto& row : rows) text += json(row).dump() + "\n";
  const auto path = fs::path(common.out_dir) / (spec.scenario_id + ".montecarlo.jsonl");
  write_text_file(path, text);

  const auto s = summarize(rows);
  out << "verdicts: " << path.string() << "\n"
      << "summary: samples=" << s.samples << " const_steady_state=" << s.const_steady
      << " const_divergence=" << s.const_divergent << " sin_chaotic_like=" << s.sin_chaotic
      << " sin_sustained_oscillation=" << s.sin_oscillation << " sin_inconclusive=" << s.sin_inconclusive
      << " sin_steady_state=" << s.sin_steady << " sin_divergence=" << s.sin_divergent << "\n";
  return kOk;
}

int cmd_freqresp(const CommonArgs& common, const FreqRespArgs& a, std::ostream& out) {
  const auto spec = resolve_spec(common);
  const auto sys = make_scenario_system(spec.scenario_id, spec.k);
  if (!sys.filter()) throw ParameterError("scenario '" + spec.scenario_id + "' has no LTI front end");
  const auto& filter = *sys.filter();

  std::vector<double> omegas = a.omegas;
  if (omegas.empty()) {
    if (!(a.omega_min > 0.0) || !(a.omega_max >= a.omega_min) || a.points_per_decade < 1)
      throw ParameterError("frequency grid needs 0 < omega-min <= omega-max and points-per-decade >= 1");
    const double lo = std::log10(a.omega_min);
    const double hi = std::log10(a.omega_max);
    const auto count = static_cast<int>(std::floor((hi - lo) * a.points_per_decade + 1e-9));
    omegas.push_back(0.0);
    for (int i = 0; i <= count; ++i) omegas.push_back(std::pow(10.0, lo + static_cast<double>(i) / a.points_per_decade));
  }

  const auto w0 = transfer_eval(filter, {0.0, 0.0});
  const bool zero = w0.abs() <= a.tol;
  out << "# scenario " << spec.scenario_id << ": |W(0)| = " << w0.abs() << " (tol " << a.tol
      << "), zero at origin: " << (zero ? "yes" : "no") << "\n";
  out << "omega,magnitude,phase\n";
  out.precision(17);
  for (double w : omegas) {
    if (w < 0.0) throw ParameterError("frequencies must be >= 0");
    const auto v = transfer_eval(filter, {0.0, w});
    out << w << "," << v.abs() << "," << v.arg() << "\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forced cascades that settle under constant input and turn chaotic under periodic input"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  CommonArgs sim_common, lyap_common, mc_common, fr_common;
  SimulateArgs sim;
  LyapunovArgs lyap;
  MonteCarloArgs mc;
  FreqRespArgs fr;

  auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write CSV, JSON report and manifest");
  add_common(simulate, sim_common, "example1");
  simulate->add_option("--t-start", sim.t_start, "Start time (default 0)");
  simulate->add_option("--t-end", sim.t_end, "End time (default: preset)");
  simulate->add_option("--grid-step", sim.grid_step, "Output grid step (default 0.01)");
  simulate->add_option("--manifest", sim.manifest, "Re-run exactly the parameters stored in a manifest file");

  auto* lyapunov = app.add_subcommand("lyapunov", "Estimate the largest Lyapunov exponent");
  add_common(lyapunov, lyap_common, "example1");
  lyapunov->add_option("--system", lyap.system, "Built-in autonomous system ('lorenz')");
  lyapunov->add_option("--transient", lyap.opts.transient, "Discarded transient")->capture_default_str();
  lyapunov->add_option("--horizon", lyap.opts.horizon, "Averaging horizon")->capture_default_str();
  lyapunov->add_option("--d0", lyap.opts.d0, "Perturbation size")->capture_default_str();
  lyapunov->add_option("--renorm-dt", lyap.opts.renorm_dt, "Renormalization interval")->capture_default_str();

  auto* montecarlo = app.add_subcommand("montecarlo", "Seeded sweep over constant inputs and initial states");
  add_common(montecarlo, mc_common, "example2");
  montecarlo->add_option("--n", mc.n, "Number of samples")->required();
  montecarlo->add_option("--seed", mc.seed, "PRNG seed")->capture_default_str();
  montecarlo->add_option("--jobs", mc.jobs, "Worker threads")->capture_default_str();
  montecarlo->add_option("--t-end", mc.horizon, "Simulation horizon per run")->capture_default_str();
  montecarlo->add_option("--range-lo", mc.range_lo, "Lower bound of sampled values")->capture_default_str();
  montecarlo->add_option("--range-hi", mc.range_hi, "Upper bound of sampled values")->capture_default_str();

  auto* freqresp = app.add_subcommand("freqresp", "Tabulate W(i omega) of the scenario's LTI front end");
  add_common(freqresp, fr_common, "example1");
  freqresp->add_option("--omega-min", fr.omega_min)->capture_default_str();
  freqresp->add_option("--omega-max", fr.omega_max)->capture_default_str();
  freqresp->add_option("--points-per-decade", fr.points_per_decade)->capture_default_str();
  freqresp->add_option("--omega", fr.omegas, "Explicit frequencies (overrides the log grid)")->delimiter(',');
  freqresp->add_option("--tol", fr.tol, "Tolerance for the zero-at-origin flag")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_common, sim, out);
    if (lyapunov->parsed()) return cmd_lyapunov(lyap_common, lyap, out);
    if (montecarlo->parsed()) return cmd_montecarlo(mc_common, mc, out);
    if (freqresp->parsed()) return cmd_freqresp(fr_common, fr, out);
  } catch (const DivergenceError& e) {
    err << "integration failed: " << e.what() << " (last good time " << e.last_good_time() << ")\n";
    return kIntegrationFailure;
  } catch (const StiffnessError& e) {
    err << "integration failed: " << e.what() << " (last good time " << e.time() << ")\n";
    return kIntegrationFailure;
  } catch (const BudgetError& e) {
    err << "integration failed: " << e.what() << " (last good time " << e.time() << ")\n";
    return kIntegrationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kBadArguments;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"entrain"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace entrain::cli
