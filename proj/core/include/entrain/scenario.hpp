#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/blocks.hpp"
#include "entrain/solver.hpp"

namespace entrain {

[[nodiscard]] std::string_view version() noexcept;

/// Named preset: default parameters and initial conditions for one cascade.
struct ScenarioPreset {
  std::string id;
  std::string description;
  double k = 0.1;
  std::string input_spec;     // default forcing
  std::vector<double> x0;
  double t_end = 200.0;
  std::vector<double> constant_inputs;  // constant-input values quoted alongside the preset
};

/// example1, example2, interp-lorenz, general, lorenz.
[[nodiscard]] const std::vector<ScenarioPreset>& scenario_presets();
/// Throws ParameterError for unknown names.
[[nodiscard]] const ScenarioPreset& find_preset(std::string_view id);

/// Builds the system for a preset name with saturation parameter `k` (ignored by `lorenz`).
[[nodiscard]] ComposedSystem make_scenario_system(std::string_view id, double k);

/// Everything needed to reproduce a simulate run.
struct ScenarioSpec {
  std::string scenario_id = "example1";
  double k = 0.1;
  std::string input_spec = "sin:1:1";
  std::vector<double> x0;
  TimeSpan t_span{0.0, 200.0};
  double output_grid_step = 0.01;
  IntegratorConfig integrator;

  /// Fills k, input, x0 and t_end from the named preset.
  static ScenarioSpec from_preset(std::string_view id);

  /// Throws ParameterError or ContractError when inconsistent with the named scenario.
  void validate() const;
};

}  // namespace entrain
