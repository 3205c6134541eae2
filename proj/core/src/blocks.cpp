#include "entrain/blocks.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "entrain/error.hpp"

namespace entrain {

namespace {

constexpr double kZeroAtOriginTol = 1e-9;

std::vector<std::string> filter_names(std::size_t n) {
  if (n == 1) return {"x"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

std::vector<std::string> field_names(const VectorField& f) {
  if (f.names.size() == f.dim) return f.names;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < f.dim; ++i) names.push_back("z" + std::to_string(i + 1));
  return names;
}

Layout cascade_layout(std::size_t filter_n, const VectorField& field) {
  Layout l;
  l.filter_begin = 0;
  l.filter_size = filter_n;
  l.p = filter_n;
  l.z_begin = filter_n + 1;
  l.z_size = field.dim;
  l.names = filter_names(filter_n);
  l.names.emplace_back("p");
  for (auto& n : field_names(field)) l.names.push_back(std::move(n));
  return l;
}

void check_field(const VectorField& f, const char* what) {
  if (f.dim == 0 || !f.rhs) throw ConstructionError(std::string(what) + ": vector field needs dim >= 1 and a rhs");
}

void check_filter(const LtiSystem& filter1) {
  if (!filter1.is_hurwitz())
    throw ConstructionError("filter 1 is not Hurwitz (spectral abscissa " +
                            std::to_string(filter1.spectral_abscissa()) + "); constant-input outputs would not settle");
  if (!has_zero_at_origin(filter1, kZeroAtOriginTol))
    throw ConstructionError("filter 1 has W(0) != 0; constant inputs would not drive its output to zero");
}

const std::vector<std::string> kFiveStateNames{"x", "p", "xi", "psi", "zeta"};

Layout five_state_layout() {
  Layout l;
  l.filter_size = 1;
  l.p = 1;
  l.z_begin = 2;
  l.z_size = 3;
  l.names = kFiveStateNames;
  return l;
}

}  // namespace

Saturation::Saturation(double k) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("saturation K must be finite and > 0, got " + std::to_string(k));
}

std::vector<double> lorenz_rhs(const LorenzParams& params, std::span<const double> z) {
  if (z.size() != 3) throw ContractError("Lorenz state must have three components");
  return {params.s * (z[1] - z[0]), params.r * z[0] - z[1] - z[0] * z[2], z[0] * z[1] - params.b * z[2]};
}

std::vector<double> VectorField::operator()(std::span<const double> z) const {
  if (z.size() != dim) throw ContractError("vector field state has wrong dimension");
  std::vector<double> dz(dim);
  rhs(z, dz);
  return dz;
}

VectorField lorenz_field(const LorenzParams& params) {
  return {3,
          [params](std::span<const double> z, std::span<double> dz) {
            dz[0] = params.s * (z[1] - z[0]);
            dz[1] = params.r * z[0] - z[1] - z[0] * z[2];
            dz[2] = z[0] * z[1] - params.b * z[2];
          },
          {"xi", "psi", "zeta"}};
}

VectorField damped_linear_field() {
  return {3,
          [](std::span<const double> z, std::span<double> dz) {
            dz[0] = 10.0 * (z[1] - z[0]);
            dz[1] = -z[1];
            dz[2] = -(8.0 / 3.0) * z[2];
          },
          {"xi", "psi", "zeta"}};
}

std::size_t Layout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw UnknownVariableError("no state variable named '" + std::string(name) + "'");
}

ComposedSystem::ComposedSystem(std::string scenario_id, Layout layout, Rhs rhs, std::optional<LtiSystem> filter,
                               std::optional<Saturation> saturation)
    : scenario_id_(std::move(scenario_id)),
      layout_(std::move(layout)),
      rhs_(std::move(rhs)),
      filter_(std::move(filter)),
      saturation_(saturation) {
  if (layout_.dim() == 0 || !rhs_) throw ConstructionError("composed system needs a state and a rhs");
  const std::size_t covered = layout_.filter_size + (layout_.p ? 1 : 0) + layout_.z_size;
  if (covered != layout_.dim()) throw ConstructionError("layout indices do not partition the state vector");
}

void ComposedSystem::rhs(double t, std::span<const double> state, double u, std::span<double> out) const {
  if (state.size() != dim() || out.size() != dim()) throw ContractError("composed system state has wrong dimension");
  rhs_(t, state, u, out);
}

std::vector<double> ComposedSystem::rhs(double t, std::span<const double> state, double u) const {
  std::vector<double> out(dim());
  rhs(t, state, u, out);
  return out;
}

ComposedSystem ComposedSystem::with_scenario_id(std::string id) const {
  ComposedSystem copy = *this;
  copy.scenario_id_ = std::move(id);
  return copy;
}

ComposedSystem compose_example1(double k, const LorenzParams& params) {
  const Saturation sat(k);
  auto rhs = [sat, params](double, std::span<const double> st, double u, std::span<double> out) {
    const double x = st[0], p = st[1], xi = st[2], psi = st[3], zeta = st[4];
    out[0] = -x - u;
    out[1] = lag_rhs(p, sat(x + u));
    out[2] = p * (params.s * (psi - xi));
    out[3] = p * (params.r * xi - psi - xi * zeta);
    out[4] = p * (xi * psi - params.b * zeta);
  };
  return {"example1", five_state_layout(), rhs, LtiSystem::washout(), sat};
}

ComposedSystem compose_example2(double k) {
  const Saturation sat(k);
  auto rhs = [sat](double, std::span<const double> st, double u, std::span<double> out) {
    const double x = st[0], p = st[1], xi = st[2], psi = st[3], zeta = st[4];
    out[0] = -x - u;
    out[1] = lag_rhs(p, sat(x + u));
    out[2] = 10.0 * (psi - xi);
    out[3] = 28.0 * p * xi - psi - p * xi * zeta;
    out[4] = p * xi * psi - (8.0 / 3.0) * zeta;
  };
  return {"example2", five_state_layout(), rhs, LtiSystem::washout(), sat};
}

ComposedSystem compose_general(const LtiSystem& filter1, const Saturation& sat, const VectorField& field) {
  check_filter(filter1);
  check_field(field, "compose_general");
  const std::size_t n = filter1.order();
  auto rhs = [filter1, sat, f = field.rhs, n, m = field.dim](double, std::span<const double> st, double u,
                                                             std::span<double> out) {
    const double y = filter1.evaluate(st.first(n), u, out.first(n));
    const double p = st[n];
    out[n] = lag_rhs(p, sat(y));
    auto dz = out.subspan(n + 1, m);
    f(st.subspan(n + 1, m), dz);
    for (auto& v : dz) v = p * v;
  };
  return {"general", cascade_layout(n, field), rhs, filter1, sat};
}

ComposedSystem compose_interpolated(const LtiSystem& filter1, const Saturation& sat, const VectorField& f0,
                                    const VectorField& f1) {
  check_filter(filter1);
  check_field(f0, "compose_interpolated");
  check_field(f1, "compose_interpolated");
  if (f0.dim != f1.dim)
    throw ConstructionError("compose_interpolated: f0 has dim " + std::to_string(f0.dim) + " but f1 has dim " +
                            std::to_string(f1.dim));
  const std::size_t n = filter1.order();
  auto rhs = [filter1, sat, g0 = f0.rhs, g1 = f1.rhs, n, m = f0.dim](double, std::span<const double> st, double u,
                                                                     std::span<double> out) {
    const double y = filter1.evaluate(st.first(n), u, out.first(n));
    const double p = st[n];
    out[n] = lag_rhs(p, sat(y));
    const auto z = st.subspan(n + 1, m);
    auto dz = out.subspan(n + 1, m);
    thread_local std::vector<double> d0;
    d0.resize(m);
    g0(z, d0);
    g1(z, dz);
    for (std::size_t i = 0; i < m; ++i) dz[i] = p * dz[i] + (1.0 - p) * d0[i];
  };
  const VectorField& named = f1.names.size() == f1.dim ? f1 : f0;
  return {"interpolated", cascade_layout(n, named), rhs, filter1, sat};
}

ComposedSystem compose_autonomous(const VectorField& field, std::string scenario_id) {
  check_field(field, "compose_autonomous");
  Layout l;
  l.z_begin = 0;
  l.z_size = field.dim;
  l.names = field_names(field);
  auto rhs = [f = field.rhs](double, std::span<const double> st, double, std::span<double> out) { f(st, out); };
  return {std::move(scenario_id), std::move(l), rhs};
}

}  // namespace entrain
