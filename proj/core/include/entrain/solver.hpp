#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entrain/blocks.hpp"
#include "entrain/signals.hpp"

namespace entrain {

enum class Method { rk4_fixed, rk45_adaptive };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
/// Accepts "rk4" / "rk4_fixed" / "rk45" / "rk45_adaptive"; throws ParameterError otherwise.
[[nodiscard]] Method parse_method(std::string_view name);

struct IntegratorConfig {
  Method method = Method::rk45_adaptive;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double h_init = 1e-3;  // also the step of rk4_fixed
  double h_min = 1e-12;
  double h_max = 0.1;
  std::int64_t max_steps = 100'000'000;

  /// Throws ParameterError unless 0 < h_min <= h_init <= h_max and tolerances > 0.
  void validate() const;
};

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;
};

/// Where a trajectory is sampled: an explicit list of times, or every accepted step.
struct OutputGrid {
  std::vector<double> times;
  bool dense = false;

  static OutputGrid at(std::vector<double> times) { return {std::move(times), false}; }
  static OutputGrid steps() { return {{}, true}; }
  /// start, start + step, ... with the last point exactly at `end`.
  static OutputGrid uniform(TimeSpan span, double step);
  /// Just the two endpoints of the span (one point when the span is empty).
  static OutputGrid endpoints(TimeSpan span);
};

/// Samples of a solution. Row i holds the state at times()[i].
class Trajectory {
 public:
  Trajectory(std::vector<std::string> columns, std::string scenario_id, std::string input_spec);

  void append(double t, std::span<const double> state);

  [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return columns_.size(); }
  [[nodiscard]] bool empty() const noexcept { return times_.empty(); }
  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim(), dim()}; }
  [[nodiscard]] std::span<const double> back() const { return row(size() - 1); }
  [[nodiscard]] double at(std::size_t i, std::size_t column) const { return data_[i * dim() + column]; }
  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  /// Throws UnknownVariableError.
  [[nodiscard]] std::size_t column_index(std::string_view name) const;
  [[nodiscard]] std::vector<double> column(std::size_t c) const;

  [[nodiscard]] const std::string& scenario_id() const noexcept { return scenario_id_; }
  [[nodiscard]] const std::string& input_spec() const noexcept { return input_spec_; }
  void set_input_spec(std::string spec) { input_spec_ = std::move(spec); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<std::string> columns_;
  std::string scenario_id_;
  std::string input_spec_;
  std::vector<double> times_;
  std::vector<double> data_;
};

struct IntegratorStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t rhs_evals = 0;
};

/// Stateful time stepper for one system and input. Carries the adaptive step size
/// across successive `advance` calls, which is what repeated short integrations
/// (Lyapunov renormalization) want.
class Integrator {
 public:
  Integrator(ComposedSystem sys, InputSignal input, IntegratorConfig cfg);

  /// Integrates `state` from `t` to `t_end` in place; `t` is set to `t_end` on return.
  /// Throws StiffnessError, DivergenceError or BudgetError.
  void advance(double& t, std::span<double> state, double t_end);

  /// Integrates from t_span.start and records the state at every point of `grid`.
  [[nodiscard]] Trajectory run(std::span<const double> x0, TimeSpan t_span, const OutputGrid& grid);

  [[nodiscard]] const IntegratorStats& stats() const noexcept { return stats_; }
  [[nodiscard]] const ComposedSystem& system() const noexcept { return sys_; }
  [[nodiscard]] const IntegratorConfig& config() const noexcept { return cfg_; }

 private:
  struct Observer;
  void advance_rk45(double& t, std::span<double> y, double t_end, Observer* obs);
  void advance_rk4(double& t, std::span<double> y, double t_end, Observer* obs);
  void eval(double t, std::span<const double> y, std::span<double> dy);

  ComposedSystem sys_;
  InputSignal input_;
  IntegratorConfig cfg_;
  IntegratorStats stats_;
  double h_;
  std::vector<double> k_[7];
  std::vector<double> ytmp_, ynew_;
  bool fsal_valid_ = false;
};

/// Solves x' = F(x, u(t)) from x0 over t_span, sampled on `grid`.
/// rk45_adaptive: Dormand-Prince 5(4) with per-component error control
/// |e_i| <= abs_tol + rel_tol |x_i| and 4th-order dense output to the grid.
/// rk4_fixed: classic RK4 with step h_init, shortened so that every grid point is hit exactly.
[[nodiscard]] Trajectory integrate(const ComposedSystem& sys, const InputSignal& input, std::span<const double> x0,
                                   TimeSpan t_span, const IntegratorConfig& cfg, const OutputGrid& grid);

/// Two stacked copies of `sys` (state [a; b]) driven by the same input. Integrating this
/// keeps both copies on one step sequence, so their difference is not polluted by
/// independent step-size decisions.
[[nodiscard]] ComposedSystem duplicate_system(const ComposedSystem& sys);

/// Two solutions from different initial states, advanced with shared steps and
/// sampled on the same output grid.
[[nodiscard]] std::pair<Trajectory, Trajectory> integrate_pair(const ComposedSystem& sys, const InputSignal& input,
                                                               std::span<const double> x0_a,
                                                               std::span<const double> x0_b, TimeSpan t_span,
                                                               const IntegratorConfig& cfg, const OutputGrid& grid);

}  // namespace entrain
