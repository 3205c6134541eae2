#include "entrain/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "entrain/error.hpp"

namespace entrain {

namespace {

constexpr double kMinSpan = 10.0;

std::size_t tail_begin(const Trajectory& traj, double fraction, TimeSpan& window) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ParameterError("tail fraction must lie in (0, 1)");
  if (traj.size() < 2) throw InsufficientDataError("trajectory has fewer than two samples");
  const double t0 = traj.times().front();
  const double t1 = traj.times().back();
  window = {t1 - fraction * (t1 - t0), t1};
  const auto& ts = traj.times();
  const auto it = std::lower_bound(ts.begin(), ts.end(), window.start);
  const auto first = static_cast<std::size_t>(it - ts.begin());
  if (traj.size() - first < 2) throw InsufficientDataError("tail window holds fewer than two samples");
  window.start = ts[first];
  return first;
}

Verdict classify(double lambda, double threshold) {
  if (lambda > threshold) return Verdict::chaotic_like;
  if (std::abs(lambda) <= threshold) return Verdict::sustained_oscillation;
  return Verdict::inconclusive;
}

}  // namespace

SteadyStateReport detect_steady_state(const Trajectory& traj, double tail_fraction, double eps) {
  if (!(eps > 0.0)) throw ParameterError("steady-state eps must be > 0");
  if (traj.size() < 2 || traj.times().back() - traj.times().front() < kMinSpan)
    throw InsufficientDataError("steady-state detection needs a trajectory spanning at least 10 time units");

  SteadyStateReport rep;
  const std::size_t first = tail_begin(traj, tail_fraction, rep.tail_window);
  const std::size_t n = traj.size();
  const std::size_t dim = traj.dim();

  rep.converged = true;
  for (std::size_t c = 0; c < dim; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (std::size_t i = first; i < n; ++i) {
      const double v = traj.at(i, c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    const double mean = sum / static_cast<double>(n - first);
    const double variation = hi - lo;
    rep.max_component_variation = std::max(rep.max_component_variation, variation);
    if (!(variation <= eps * (1.0 + std::abs(mean)))) rep.converged = false;
  }

  const auto last = traj.row(n - 1);
  const auto prev = traj.row(n - 2);
  const double dt = traj.times()[n - 1] - traj.times()[n - 2];
  double acc = 0.0;
  for (std::size_t c = 0; c < dim; ++c) acc += (last[c] - prev[c]) * (last[c] - prev[c]);
  rep.velocity_norm_at_end = std::sqrt(acc) / dt;
  rep.final_state.assign(last.begin(), last.end());
  return rep;
}

TailStats tail_stats(const Trajectory& traj, std::string_view variable, double window_fraction) {
  const std::size_t c = traj.column_index(variable);
  TailStats st;
  st.variable = std::string(variable);
  const std::size_t first = tail_begin(traj, window_fraction, st.window);
  const auto& ts = traj.times();
  st.min = std::numeric_limits<double>::infinity();
  st.max = -st.min;
  double integral = 0.0;
  for (std::size_t i = first; i < traj.size(); ++i) {
    const double v = traj.at(i, c);
    st.min = std::min(st.min, v);
    st.max = std::max(st.max, v);
    if (i > first) integral += 0.5 * (ts[i] - ts[i - 1]) * (v + traj.at(i - 1, c));
  }
  st.mean = std::clamp(integral / (st.window.end - st.window.start), st.min, st.max);
  return st;
}

LyapunovEstimate lyapunov_max(const ComposedSystem& sys, const InputSignal& input, std::span<const double> x0,
                              const IntegratorConfig& cfg, const LyapunovOptions& opts) {
  if (!(opts.renorm_dt > 0.0) || !(opts.d0 > 0.0) || !(opts.transient >= 0.0))
    throw ParameterError("Lyapunov options need renorm_dt > 0, d0 > 0, transient >= 0");
  if (!(opts.horizon >= 100.0 * opts.renorm_dt))
    throw ParameterError("Lyapunov horizon must be at least 100 renormalization intervals");
  const auto count = static_cast<std::int64_t>(std::floor(opts.horizon / opts.renorm_dt + 1e-9));
  if (count < kMinRenormEvents) throw InsufficientDataError("fewer than 50 renormalization events");

  const std::size_t n = sys.dim();
  if (x0.size() != n) throw ContractError("initial state has wrong dimension");

  std::vector<double> ref(x0.begin(), x0.end());
  double t = 0.0;
  if (opts.transient > 0.0) {
    Integrator single(sys, input, cfg);
    single.advance(t, ref, opts.transient);
  }

  const auto& layout = sys.layout();
  const std::size_t zb = layout.z_size > 0 ? layout.z_begin : 0;
  const std::size_t zn = layout.z_size > 0 ? layout.z_size : n;
  const double offset = opts.d0 / std::sqrt(static_cast<double>(zn));

  std::vector<double> pair(2 * n);
  std::copy(ref.begin(), ref.end(), pair.begin());
  std::copy(ref.begin(), ref.end(), pair.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = zb; i < zb + zn; ++i) pair[n + i] += offset;

  Integrator joint(duplicate_system(sys), input, cfg);
  const double t_start = t;
  double log_sum = 0.0;
  for (std::int64_t k = 1; k <= count; ++k) {
    joint.advance(t, pair, t_start + static_cast<double>(k) * opts.renorm_dt);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (pair[n + i] - pair[i]) * (pair[n + i] - pair[i]);
    const double d = std::sqrt(d2);
    if (!(d > 0.0) || !std::isfinite(d))
      throw InsufficientDataError("perturbation collapsed or overflowed at t=" + std::to_string(t));
    log_sum += std::log(d / opts.d0);
    const double scale = opts.d0 / d;
    for (std::size_t i = 0; i < n; ++i) pair[n + i] = pair[i] + scale * (pair[n + i] - pair[i]);
  }

  LyapunovEstimate est;
  est.renorm_count = count;
  est.renorm_interval = opts.renorm_dt;
  est.transient_discarded = opts.transient;
  est.perturbation_size = opts.d0;
  est.lambda_max = log_sum / (static_cast<double>(count) * opts.renorm_dt);
  return est;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::steady_state:
      return "steady_state";
    case Verdict::sustained_oscillation:
      return "sustained_oscillation";
    case Verdict::chaotic_like:
      return "chaotic_like";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

VerdictReport entrainment_verdict(const ComposedSystem& sys, const InputSignal& input, std::span<const double> x0,
                                  const IntegratorConfig& cfg, const VerdictOptions& opts) {
  const TimeSpan span{0.0, opts.horizon};
  const auto traj = integrate(sys, input, x0, span, cfg, OutputGrid::uniform(span, opts.grid_step));

  VerdictReport rep;
  rep.steady = detect_steady_state(traj, opts.tail_fraction, opts.eps);
  if (const auto p = sys.layout().p) rep.p_tail = tail_stats(traj, sys.layout().names[*p], opts.tail_fraction);
  rep.lyapunov = lyapunov_max(sys, input, x0, cfg, opts.lyapunov);

  if (rep.steady.converged) {
    rep.verdict = Verdict::steady_state;
    return rep;
  }
  rep.verdict = classify(rep.lyapunov.lambda_max, opts.chaos_threshold);
  if (opts.tolerance_cross_check > 0.0 && rep.verdict != Verdict::inconclusive) {
    IntegratorConfig loose = cfg;
    loose.rel_tol *= opts.tolerance_cross_check;
    loose.abs_tol *= opts.tolerance_cross_check;
    rep.lyapunov_loose = lyapunov_max(sys, input, x0, loose, opts.lyapunov);
    if (classify(rep.lyapunov_loose->lambda_max, opts.chaos_threshold) != rep.verdict)
      rep.verdict = Verdict::inconclusive;
  }
  return rep;
}

}  // namespace entrain
