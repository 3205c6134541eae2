#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "entrain/diagnostics.hpp"
#include "entrain/scenario.hpp"
#include "entrain/solver.hpp"

namespace entrain {

/// `t,<columns...>` header, comma separated, 17 significant digits, LF line endings.
void write_csv(const Trajectory& traj, std::ostream& out);
void write_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories. Throws Error on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

void to_json(nlohmann::json& j, const TimeSpan& w);
void to_json(nlohmann::json& j, const SteadyStateReport& r);
void to_json(nlohmann::json& j, const TailStats& s);
void to_json(nlohmann::json& j, const LyapunovEstimate& e);
void to_json(nlohmann::json& j, const IntegratorConfig& c);
void from_json(const nlohmann::json& j, IntegratorConfig& c);

/// One verdict-table line: sample, u0, x0, verdict_const, verdict_sin, lambda_const,
/// lambda_sin, p_tail_mean_const, p_tail_mean_sin. Diverged runs carry the verdict
/// "divergence", a null lambda and an `error_const` / `error_sin` message.
void to_json(nlohmann::json& j, const MonteCarloRow& row);

/// Run manifest: every parameter of a simulate run plus tool name and version.
[[nodiscard]] nlohmann::json make_manifest(const ScenarioSpec& spec);
/// Throws ParameterError when required fields are missing or malformed.
[[nodiscard]] ScenarioSpec spec_from_manifest(const nlohmann::json& manifest);

}  // namespace entrain
