#include "entrain/io.hpp"

#include <fstream>
#include <sstream>

#include "entrain/error.hpp"
#include "text_util.hpp"

namespace entrain {

using nlohmann::json;

void write_csv(const Trajectory& traj, std::ostream& out) {
  std::string line = "t";
  for (const auto& c : traj.columns()) line += "," + c;
  out << line << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    line = detail::format_full(traj.times()[i]);
    for (double v : traj.row(i)) {
      line += ',';
      line += detail::format_full(v);
    }
    out << line << '\n';
  }
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_csv(traj, buf);
  write_text_file(path, buf.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void to_json(json& j, const TimeSpan& w) { j = json::array({w.start, w.end}); }

void to_json(json& j, const SteadyStateReport& r) {
  j = json{{"converged", r.converged},
           {"tail_window", r.tail_window},
           {"max_component_variation", r.max_component_variation},
           {"final_state", r.final_state},
           {"velocity_norm_at_end", r.velocity_norm_at_end}};
}

void to_json(json& j, const TailStats& s) {
  j = json{{"variable", s.variable}, {"window", s.window}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

void to_json(json& j, const LyapunovEstimate& e) {
  j = json{{"lambda_max", e.lambda_max},
           {"renorm_interval", e.renorm_interval},
           {"renorm_count", e.renorm_count},
           {"transient_discarded", e.transient_discarded},
           {"perturbation_size", e.perturbation_size}};
}

void to_json(json& j, const IntegratorConfig& c) {
  j = json{{"method", std::string(to_string(c.method))},
           {"rel_tol", c.rel_tol},
           {"abs_tol", c.abs_tol},
           {"h_init", c.h_init},
           {"h_min", c.h_min},
           {"h_max", c.h_max},
           {"max_steps", c.max_steps}};
}

void from_json(const json& j, IntegratorConfig& c) {
  c = IntegratorConfig{};
  if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
  if (j.contains("rel_tol")) c.rel_tol = j.at("rel_tol").get<double>();
  if (j.contains("abs_tol")) c.abs_tol = j.at("abs_tol").get<double>();
  if (j.contains("h_init")) c.h_init = j.at("h_init").get<double>();
  if (j.contains("h_min")) c.h_min = j.at("h_min").get<double>();
  if (j.contains("h_max")) c.h_max = j.at("h_max").get<double>();
  if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<std::int64_t>();
}

namespace {

json verdict_json(const MonteCarloRun& run) {
  return run.diverged() ? json("divergence") : json(std::string(to_string(*run.verdict)));
}

json lambda_json(const MonteCarloRun& run) { return run.diverged() ? json(nullptr) : json(run.lambda); }

json p_json(const MonteCarloRun& run) { return run.p_tail_mean ? json(*run.p_tail_mean) : json(nullptr); }

}  // namespace

void to_json(json& j, const MonteCarloRow& row) {
  j = json{{"sample", row.sample},
           {"u0", row.u0},
           {"x0", row.x0},
           {"verdict_const", verdict_json(row.constant)},
           {"verdict_sin", verdict_json(row.periodic)},
           {"lambda_const", lambda_json(row.constant)},
           {"lambda_sin", lambda_json(row.periodic)},
           {"p_tail_mean_const", p_json(row.constant)},
           {"p_tail_mean_sin", p_json(row.periodic)}};
  if (row.constant.diverged()) j["error_const"] = row.constant.error;
  if (row.periodic.diverged()) j["error_sin"] = row.periodic.error;
}

json make_manifest(const ScenarioSpec& spec) {
  return json{{"tool", "entrain"},
              {"version", std::string(version())},
              {"command", "simulate"},
              {"scenario", spec.scenario_id},
              {"K", spec.k},
              {"input", spec.input_spec},
              {"x0", spec.x0},
              {"t_start", spec.t_span.start},
              {"t_end", spec.t_span.end},
              {"grid_step", spec.output_grid_step},
              {"integrator", spec.integrator},
              {"seed", nullptr}};
}

ScenarioSpec spec_from_manifest(const json& m) {
  try {
    ScenarioSpec s;
    s.scenario_id = m.at("scenario").get<std::string>();
    s.k = m.at("K").get<double>();
    s.input_spec = m.at("input").get<std::string>();
    s.x0 = m.at("x0").get<std::vector<double>>();
    s.t_span = {m.at("t_start").get<double>(), m.at("t_end").get<double>()};
    s.output_grid_step = m.at("grid_step").get<double>();
    s.integrator = m.at("integrator").get<IntegratorConfig>();
    return s;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace entrain
