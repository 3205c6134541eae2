#include "entrain/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "entrain/error.hpp"
#include "text_util.hpp"

namespace entrain {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// Continuous extension (Hairer & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr double kHuge = 1e100;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && std::abs(x) < kHuge; });
}

std::string at_time(double t) { return " at t=" + detail::format_shortest(t); }

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::rk4_fixed ? "rk4_fixed" : "rk45_adaptive"; }

Method parse_method(std::string_view name) {
  if (name == "rk4" || name == "rk4_fixed") return Method::rk4_fixed;
  if (name == "rk45" || name == "rk45_adaptive" || name == "dopri5") return Method::rk45_adaptive;
  throw ParameterError("unknown integration method '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ParameterError("integrator tolerances must be > 0");
  if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max) || !std::isfinite(h_max))
    throw ParameterError("integrator steps must satisfy 0 < h_min <= h_init <= h_max");
  if (max_steps <= 0) throw ParameterError("max_steps must be positive");
}

OutputGrid OutputGrid::uniform(TimeSpan span, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("grid step must be finite and > 0");
  if (!(span.end >= span.start)) throw ParameterError("time span must be increasing");
  OutputGrid g;
  const double len = span.end - span.start;
  const auto n = static_cast<std::size_t>(std::floor(len / step + 1e-9));
  g.times.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = span.start + static_cast<double>(i) * step;
    if (t >= span.end) break;
    g.times.push_back(t);
  }
  g.times.push_back(span.end);
  return g;
}

OutputGrid OutputGrid::endpoints(TimeSpan span) {
  if (span.end == span.start) return at({span.start});
  return at({span.start, span.end});
}

Trajectory::Trajectory(std::vector<std::string> columns, std::string scenario_id, std::string input_spec)
    : columns_(std::move(columns)), scenario_id_(std::move(scenario_id)), input_spec_(std::move(input_spec)) {}

void Trajectory::append(double t, std::span<const double> state) {
  if (state.size() != dim()) throw ContractError("trajectory row has wrong dimension");
  if (!times_.empty() && !(t > times_.back())) throw ContractError("trajectory times must be strictly increasing");
  times_.push_back(t);
  data_.insert(data_.end(), state.begin(), state.end());
}

std::size_t Trajectory::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw UnknownVariableError("trajectory has no column '" + std::string(name) + "'");
}

std::vector<double> Trajectory::column(std::size_t c) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = at(i, c);
  return out;
}

// Receives every accepted step and samples the requested grid points inside it.
struct Integrator::Observer {
  const OutputGrid* grid = nullptr;
  std::size_t next = 0;
  Trajectory* traj = nullptr;
  std::vector<double> buf;

  // Endpoint-only variant for rk4, whose steps land on grid points by construction.
  void on_point(double t, std::span<const double> y) {
    if (grid->dense) {
      traj->append(t, y);
      return;
    }
    if (next < grid->times.size() && grid->times[next] == t) {
      traj->append(t, y);
      ++next;
    }
  }

  void on_step(double t0, double t1, double h, std::span<const double> y0, std::span<const double> y1,
               const std::vector<double> (&k)[7]) {
    if (grid->dense) {
      traj->append(t1, y1);
      return;
    }
    const auto& g = grid->times;
    const std::size_t n = y0.size();
    buf.resize(n);
    while (next < g.size() && g[next] <= t1) {
      const double tg = g[next];
      if (tg == t1) {
        traj->append(tg, y1);
      } else {
        const double th = (tg - t0) / h;
        const double th1 = 1.0 - th;
        for (std::size_t i = 0; i < n; ++i) {
          const double dy = y1[i] - y0[i];
          const double bspl = h * k[0][i] - dy;
          const double r4 = dy - h * k[6][i] - bspl;
          const double r5 =
              h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
          buf[i] = y0[i] + th * (dy + th1 * (bspl + th * (r4 + th1 * r5)));
        }
        traj->append(tg, buf);
      }
      ++next;
    }
  }
};

Integrator::Integrator(ComposedSystem sys, InputSignal input, IntegratorConfig cfg)
    : sys_(std::move(sys)), input_(std::move(input)), cfg_(cfg), h_(cfg.h_init) {
  cfg_.validate();
  const auto n = sys_.dim();
  for (auto& k : k_) k.assign(n, 0.0);
  ytmp_.assign(n, 0.0);
  ynew_.assign(n, 0.0);
}

void Integrator::eval(double t, std::span<const double> y, std::span<double> dy) {
  sys_.rhs(t, y, input_(t), dy);
  ++stats_.rhs_evals;
}

void Integrator::advance(double& t, std::span<double> state, double t_end) {
  if (state.size() != sys_.dim()) throw ContractError("initial state has wrong dimension");
  if (!(t_end >= t)) throw ParameterError("integration must run forward in time");
  if (cfg_.method == Method::rk4_fixed)
    advance_rk4(t, state, t_end, nullptr);
  else
    advance_rk45(t, state, t_end, nullptr);
}

void Integrator::advance_rk4(double& t, std::span<double> y, double t_end, Observer* obs) {
  const double span = t_end - t;
  if (span <= 0.0) return;
  const auto steps = static_cast<std::int64_t>(std::max(1.0, std::ceil(span / cfg_.h_init - 1e-9)));
  const double h = span / static_cast<double>(steps);
  const double t0 = t;
  const std::size_t n = y.size();
  auto& k1 = k_[0];
  auto& k2 = k_[1];
  auto& k3 = k_[2];
  auto& k4 = k_[3];
  for (std::int64_t s = 0; s < steps; ++s) {
    if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
      throw BudgetError("step budget of " + std::to_string(cfg_.max_steps) + " exhausted" + at_time(t), t);
    const double tn = t0 + static_cast<double>(s) * h;
    eval(tn, y, k1);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + 0.5 * h * k1[i];
    eval(tn + 0.5 * h, ytmp_, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + 0.5 * h * k2[i];
    eval(tn + 0.5 * h, ytmp_, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * k3[i];
    eval(tn + h, ytmp_, k4);
    for (std::size_t i = 0; i < n; ++i) ynew_[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(ynew_)) throw DivergenceError("state became non-finite after t=" + detail::format_shortest(tn), tn);
    std::copy(ynew_.begin(), ynew_.end(), y.begin());
    ++stats_.accepted;
    t = (s + 1 == steps) ? t_end : t0 + static_cast<double>(s + 1) * h;
    if (obs != nullptr && obs->grid->dense) obs->on_point(t, y);
  }
  t = t_end;
}

void Integrator::advance_rk45(double& t, std::span<double> y, double t_end, Observer* obs) {
  const std::size_t n = y.size();
  auto& k1 = k_[0];
  auto& k2 = k_[1];
  auto& k3 = k_[2];
  auto& k4 = k_[3];
  auto& k5 = k_[4];
  auto& k6 = k_[5];
  auto& k7 = k_[6];

  // FSAL reuse is only valid while the same state flows through consecutive calls.
  fsal_valid_ = false;
  bool last_reject = false;
  bool nonfinite_reject = false;

  while (t < t_end) {
    if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
      throw BudgetError("step budget of " + std::to_string(cfg_.max_steps) + " exhausted" + at_time(t), t);

    double h = std::min(h_, cfg_.h_max);
    bool final_step = false;
    if (t + h >= t_end || t + 1.0001 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }

    if (!fsal_valid_) eval(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, ytmp_, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, ytmp_, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp_[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, ytmp_, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp_[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, ytmp_, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp_[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = final_step ? t_end : t + h;
    eval(t_new, ytmp_, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew_[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(t_new, ynew_, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    const bool finite = std::isfinite(err) && all_finite(ynew_) && all_finite(k7);

    if (!finite || err > 1.0) {
      ++stats_.rejected;
      nonfinite_reject = !finite;
      const double factor = finite ? std::max(kMinFactor, kSafety * std::pow(err, -0.2)) : kMinFactor;
      h_ = h * std::min(1.0, factor);
      last_reject = true;
      fsal_valid_ = true;  // k1 still belongs to (t, y)
      if (h_ < cfg_.h_min) {
        if (nonfinite_reject)
          throw DivergenceError("state diverged; last finite state at t=" + detail::format_shortest(t), t);
        throw StiffnessError("step size underflow (h < " + detail::format_shortest(cfg_.h_min) + ")" + at_time(t), t);
      }
      continue;
    }

    ++stats_.accepted;
    if (obs != nullptr) obs->on_step(t, t_new, h, y, ynew_, k_);
    std::copy(ynew_.begin(), ynew_.end(), y.begin());
    std::swap(k1, k7);
    fsal_valid_ = true;
    t = t_new;

    double factor = err == 0.0 ? kMaxFactor : std::clamp(kSafety * std::pow(err, -0.2), kMinFactor, kMaxFactor);
    if (last_reject) factor = std::min(factor, 1.0);
    last_reject = false;
    // A shortened final step says nothing about the size the next interval can take.
    if (!final_step || factor < 1.0) h_ = std::clamp(h * factor, cfg_.h_min, cfg_.h_max);
  }
  fsal_valid_ = false;
}

Trajectory Integrator::run(std::span<const double> x0, TimeSpan t_span, const OutputGrid& grid) {
  if (x0.size() != sys_.dim())
    throw ContractError("initial state has " + std::to_string(x0.size()) + " entries, system needs " +
                        std::to_string(sys_.dim()));
  if (!(t_span.end >= t_span.start) || !std::isfinite(t_span.start) || !std::isfinite(t_span.end))
    throw ParameterError("time span must be finite and increasing");
  if (!all_finite(x0)) throw ParameterError("initial state must be finite");
  if (!grid.dense) {
    if (grid.times.empty()) throw ParameterError("output grid is empty");
    for (std::size_t i = 0; i < grid.times.size(); ++i) {
      if (grid.times[i] < t_span.start || grid.times[i] > t_span.end)
        throw ParameterError("output grid point " + detail::format_shortest(grid.times[i]) + " outside the time span");
      if (i > 0 && !(grid.times[i] > grid.times[i - 1]))
        throw ParameterError("output grid must be strictly increasing");
    }
  }

  Trajectory traj(sys_.layout().names, sys_.scenario_id(), to_spec(input_));
  Observer obs{&grid, 0, &traj, {}};
  std::vector<double> y(x0.begin(), x0.end());
  double t = t_span.start;
  obs.on_point(t, y);

  if (cfg_.method == Method::rk4_fixed) {
    if (grid.dense) {
      advance_rk4(t, y, t_span.end, &obs);
    } else {
      while (obs.next < grid.times.size()) {
        advance_rk4(t, y, grid.times[obs.next], nullptr);
        obs.on_point(t, y);
      }
    }
  } else {
    const double stop = grid.dense ? t_span.end : std::min(t_span.end, grid.times.back());
    advance_rk45(t, y, stop, &obs);
  }
  return traj;
}

Trajectory integrate(const ComposedSystem& sys, const InputSignal& input, std::span<const double> x0,
                     TimeSpan t_span, const IntegratorConfig& cfg, const OutputGrid& grid) {
  Integrator integ(sys, input, cfg);
  return integ.run(x0, t_span, grid);
}

ComposedSystem duplicate_system(const ComposedSystem& sys) {
  const std::size_t n = sys.dim();
  Layout l;
  l.z_begin = 0;
  l.z_size = 2 * n;
  for (const auto& name : sys.layout().names) l.names.push_back(name + "_a");
  for (const auto& name : sys.layout().names) l.names.push_back(name + "_b");
  auto rhs = [sys, n](double t, std::span<const double> st, double u, std::span<double> out) {
    sys.rhs(t, st.first(n), u, out.first(n));
    sys.rhs(t, st.subspan(n, n), u, out.subspan(n, n));
  };
  return {sys.scenario_id() + "/pair", std::move(l), rhs};
}

std::pair<Trajectory, Trajectory> integrate_pair(const ComposedSystem& sys, const InputSignal& input,
                                                 std::span<const double> x0_a, std::span<const double> x0_b,
                                                 TimeSpan t_span, const IntegratorConfig& cfg,
                                                 const OutputGrid& grid) {
  const std::size_t n = sys.dim();
  if (x0_a.size() != n || x0_b.size() != n) throw ContractError("pair initial states have wrong dimension");
  std::vector<double> x0(x0_a.begin(), x0_a.end());
  x0.insert(x0.end(), x0_b.begin(), x0_b.end());
  const auto joint = integrate(duplicate_system(sys), input, x0, t_span, cfg, grid);

  Trajectory a(sys.layout().names, sys.scenario_id(), joint.input_spec());
  Trajectory b(sys.layout().names, sys.scenario_id(), joint.input_spec());
  for (std::size_t i = 0; i < joint.size(); ++i) {
    const auto row = joint.row(i);
    a.append(joint.times()[i], row.first(n));
    b.append(joint.times()[i], row.subspan(n, n));
  }
  return {std::move(a), std::move(b)};
}

}  // namespace entrain
