#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entrain/lti.hpp"

namespace entrain {

/// alpha(y) = y^2 / (K + y^2). Maps the reals into [0, 1), zero at zero.
class Saturation {
 public:
  /// Throws ParameterError unless K is finite and > 0.
  explicit Saturation(double k);

  [[nodiscard]] double k() const noexcept { return k_; }
  [[nodiscard]] double operator()(double y) const noexcept {
    const double y2 = y * y;
    return y2 / (k_ + y2);
  }

 private:
  double k_;
};

/// alpha values at or above this are reported as "saturated" by diagnostics.
inline constexpr double kSaturatedLevel = 0.9;

[[nodiscard]] inline double alpha_eval(const Saturation& sat, double y) { return sat(y); }

/// Filter 2: dp/dt = -p + w.
[[nodiscard]] constexpr double lag_rhs(double p, double w) noexcept { return -p + w; }

/// Lorenz (the source spells it "Lorentz") parameters.
struct LorenzParams {
  double s = 10.0;        // Prandtl
  double r = 28.0;        // Rayleigh
  double b = 8.0 / 3.0;   // geometric factor
};

/// Lorenz right-hand side at z = (xi, psi, zeta).
[[nodiscard]] std::vector<double> lorenz_rhs(const LorenzParams& params, std::span<const double> z);

/// Autonomous vector field dz/dt = f(z).
struct VectorField {
  using Rhs = std::function<void(std::span<const double> z, std::span<double> dz)>;

  std::size_t dim = 0;
  Rhs rhs;
  std::vector<std::string> names;  // optional component names, size dim when present

  [[nodiscard]] std::vector<double> operator()(std::span<const double> z) const;
};

[[nodiscard]] VectorField lorenz_field(const LorenzParams& params = {});

/// The p = 0 limit of the modulated Lorenz cascade:
/// (10 (psi - xi), -psi, -(8/3) zeta).
[[nodiscard]] VectorField damped_linear_field();

/// Index map of a composed state vector: filter states, then p, then z.
struct Layout {
  std::size_t filter_begin = 0;
  std::size_t filter_size = 0;
  std::optional<std::size_t> p;
  std::size_t z_begin = 0;
  std::size_t z_size = 0;
  std::vector<std::string> names;

  [[nodiscard]] std::size_t dim() const noexcept { return names.size(); }
  /// Throws UnknownVariableError.
  [[nodiscard]] std::size_t index_of(std::string_view name) const;
};

/// An input-driven ODE dx/dt = F(x, u(t)) assembled from blocks.
/// Immutable; rhs evaluation is pure and may be shared across threads.
class ComposedSystem {
 public:
  using Rhs = std::function<void(double t, std::span<const double> state, double u, std::span<double> out)>;

  ComposedSystem(std::string scenario_id, Layout layout, Rhs rhs, std::optional<LtiSystem> filter = std::nullopt,
                 std::optional<Saturation> saturation = std::nullopt);

  [[nodiscard]] std::size_t dim() const noexcept { return layout_.dim(); }
  [[nodiscard]] const Layout& layout() const noexcept { return layout_; }
  [[nodiscard]] const std::string& scenario_id() const noexcept { return scenario_id_; }
  [[nodiscard]] const std::optional<LtiSystem>& filter() const noexcept { return filter_; }
  [[nodiscard]] const std::optional<Saturation>& saturation() const noexcept { return saturation_; }

  /// out = F(state, u). Sizes must equal dim(); throws ContractError otherwise.
  void rhs(double t, std::span<const double> state, double u, std::span<double> out) const;
  [[nodiscard]] std::vector<double> rhs(double t, std::span<const double> state, double u) const;

  [[nodiscard]] ComposedSystem with_scenario_id(std::string id) const;

 private:
  std::string scenario_id_;
  Layout layout_;
  Rhs rhs_;
  std::optional<LtiSystem> filter_;
  std::optional<Saturation> saturation_;
};

/// Five-state cascade: washout filter, lag, Lorenz field scaled by p.
[[nodiscard]] ComposedSystem compose_example1(double k = 0.1, const LorenzParams& params = {});

/// Five-state cascade where p modulates the Lorenz nonlinear and coupling terms only.
[[nodiscard]] ComposedSystem compose_example2(double k = 0.0001);

/// filter1 -> alpha -> lag -> dz/dt = p f(z).
/// Throws ConstructionError if filter1 is not Hurwitz or W(0) != 0.
[[nodiscard]] ComposedSystem compose_general(const LtiSystem& filter1, const Saturation& sat, const VectorField& field);

/// filter1 -> alpha -> lag -> dz/dt = p f1(z) + (1 - p) f0(z).
[[nodiscard]] ComposedSystem compose_interpolated(const LtiSystem& filter1, const Saturation& sat,
                                                  const VectorField& f0, const VectorField& f1);

/// The bare autonomous system dz/dt = f(z) (input ignored, no filter or lag states).
[[nodiscard]] ComposedSystem compose_autonomous(const VectorField& field, std::string scenario_id);

}  // namespace entrain
