#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace entrain {

struct Constant {
  double value = 0.0;
};

struct Sinusoid {
  double amplitude = 1.0;
  double omega = 1.0;  // rad/s, > 0
  double phase = 0.0;  // rad
};

/// Piecewise-linear interpolation of (times, values); times strictly increasing.
struct Sampled {
  std::vector<double> times;
  std::vector<double> values;
};

/// Scalar forcing u(t). Immutable once constructed, safe to share between threads.
class InputSignal {
 public:
  using Variant = std::variant<Constant, Sinusoid, Sampled>;

  InputSignal() : InputSignal(Constant{}) {}
  InputSignal(Constant c);  // NOLINT(google-explicit-constructor)
  InputSignal(Sinusoid s);  // NOLINT(google-explicit-constructor)
  InputSignal(Sampled s);   // NOLINT(google-explicit-constructor)

  static InputSignal constant(double c) { return {Constant{c}}; }
  static InputSignal sinusoid(double amplitude = 1.0, double omega = 1.0, double phase = 0.0) {
    return {Sinusoid{amplitude, omega, phase}};
  }

  /// Throws RangeError for Sampled inputs queried outside [times.front(), times.back()].
  [[nodiscard]] double operator()(double t) const;

  [[nodiscard]] const Variant& variant() const noexcept { return v_; }
  [[nodiscard]] bool is_constant() const noexcept { return std::holds_alternative<Constant>(v_); }

 private:
  Variant v_;
};

[[nodiscard]] inline double eval_input(const InputSignal& sig, double t) { return sig(t); }

/// Parses `const:<c>`, `sin:<amplitude>:<omega>[:<phase>]` or `file:<path>` (CSV `t,u`).
/// Throws ParameterError on malformed specs.
[[nodiscard]] InputSignal parse_input_spec(std::string_view spec);

/// Inverse of parse_input_spec for Constant and Sinusoid; Sampled inputs render as `sampled:<n>`.
[[nodiscard]] std::string to_spec(const InputSignal& sig);

/// Reads a two-column `t,u` CSV. A non-numeric first line is treated as a header.
[[nodiscard]] Sampled read_sampled_csv(const std::string& path);

}  // namespace entrain
