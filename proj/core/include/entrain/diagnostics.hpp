#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/blocks.hpp"
#include "entrain/signals.hpp"
#include "entrain/solver.hpp"

namespace entrain {

struct SteadyStateReport {
  bool converged = false;
  TimeSpan tail_window;
  double max_component_variation = 0.0;  // max over components of (max - min) in the tail
  std::vector<double> final_state;
  double velocity_norm_at_end = 0.0;     // |x(t_n) - x(t_{n-1})| / (t_n - t_{n-1})
};

/// Converged iff, for every component, (max - min) over the trailing `tail_fraction`
/// of the time span is <= eps * (1 + |mean|).
/// Throws InsufficientDataError if the trajectory spans less than 10 time units.
[[nodiscard]] SteadyStateReport detect_steady_state(const Trajectory& traj, double tail_fraction = 0.2,
                                                    double eps = 1e-5);

struct TailStats {
  std::string variable;
  TimeSpan window;
  double mean = 0.0;  // time-weighted (trapezoid) over the window
  double min = 0.0;
  double max = 0.0;
};

/// Throws UnknownVariableError.
[[nodiscard]] TailStats tail_stats(const Trajectory& traj, std::string_view variable, double window_fraction = 0.2);

struct LyapunovOptions {
  double transient = 100.0;
  double horizon = 400.0;
  double d0 = 1e-8;
  double renorm_dt = 0.5;
};

struct LyapunovEstimate {
  double lambda_max = 0.0;
  double renorm_interval = 0.0;
  std::int64_t renorm_count = 0;
  double transient_discarded = 0.0;
  double perturbation_size = 0.0;
};

inline constexpr std::int64_t kMinRenormEvents = 50;

/// Largest Lyapunov exponent by two-trajectory renormalization (Benettin).
/// The reference run is first advanced through `transient`; a companion offset by d0 along
/// the z-subsystem is then renormalized back to distance d0 every renorm_dt, and
/// lambda = sum(ln(d_i / d0)) / horizon.
/// Throws ParameterError if horizon < 100 * renorm_dt, InsufficientDataError if fewer than
/// 50 renormalizations fit, and propagates integration errors.
[[nodiscard]] LyapunovEstimate lyapunov_max(const ComposedSystem& sys, const InputSignal& input,
                                            std::span<const double> x0, const IntegratorConfig& cfg,
                                            const LyapunovOptions& opts = {});

enum class Verdict { steady_state, sustained_oscillation, chaotic_like, inconclusive };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

struct VerdictOptions {
  double horizon = 200.0;
  double grid_step = 0.01;
  double tail_fraction = 0.2;
  double eps = 1e-5;
  double chaos_threshold = 0.05;
  LyapunovOptions lyapunov;
  /// Repeat the Lyapunov estimate with tolerances loosened by this factor and call the run
  /// inconclusive if the chaos classification changes. 0 disables the cross-check.
  double tolerance_cross_check = 100.0;
};

struct VerdictReport {
  Verdict verdict = Verdict::inconclusive;
  SteadyStateReport steady;
  LyapunovEstimate lyapunov;
  std::optional<LyapunovEstimate> lyapunov_loose;
  std::optional<TailStats> p_tail;
};

/// steady_state if the trajectory over [0, horizon] settles; otherwise chaotic_like when
/// lambda_max > threshold, sustained_oscillation when |lambda_max| <= threshold, and
/// inconclusive when lambda_max < -threshold or the tolerance cross-check disagrees.
[[nodiscard]] VerdictReport entrainment_verdict(const ComposedSystem& sys, const InputSignal& input,
                                                std::span<const double> x0, const IntegratorConfig& cfg,
                                                const VerdictOptions& opts = {});

struct MonteCarloOptions {
  double range_lo = -10.0;
  double range_hi = 10.0;
  unsigned jobs = 1;
  VerdictOptions verdict;
};

struct MonteCarloRun {
  std::optional<Verdict> verdict;  // empty when the run diverged
  double lambda = 0.0;
  std::optional<double> p_tail_mean;
  std::vector<double> final_state;
  std::string error;

  [[nodiscard]] bool diverged() const noexcept { return !verdict.has_value(); }
};

struct MonteCarloRow {
  std::int64_t sample = 0;
  double u0 = 0.0;
  std::vector<double> x0;
  MonteCarloRun constant;
  MonteCarloRun periodic;  // u = sin t
};

struct MonteCarloSummary {
  std::int64_t samples = 0;
  std::int64_t const_steady = 0;
  std::int64_t const_divergent = 0;
  std::int64_t sin_steady = 0;
  std::int64_t sin_chaotic = 0;
  std::int64_t sin_oscillation = 0;
  std::int64_t sin_inconclusive = 0;
  std::int64_t sin_divergent = 0;
};

/// Draws the u0 and every initial-state component for sample i from a 64-bit Mersenne
/// Twister seeded with (seed, i), so each sample is reproducible on its own.
[[nodiscard]] std::vector<double> monte_carlo_draw(std::uint64_t seed, std::int64_t sample, std::size_t count,
                                                   double lo, double hi);

/// For each sample, runs entrainment_verdict under the constant input u0 and under sin t.
/// Samples may run on `jobs` threads; rows come back ordered by sample index.
/// Throws ParameterError if n_samples < 1 or the range is empty.
[[nodiscard]] std::vector<MonteCarloRow> monte_carlo(const ComposedSystem& sys, std::int64_t n_samples,
                                                     std::uint64_t seed, const IntegratorConfig& cfg,
                                                     const MonteCarloOptions& opts = {});

[[nodiscard]] MonteCarloSummary summarize(std::span<const MonteCarloRow> rows);

}  // namespace entrain
