#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace entrain {

/// A complex number carried as a pair of reals.
struct ComplexValue {
  double re = 0.0;
  double im = 0.0;

  [[nodiscard]] double abs() const noexcept;
  /// Principal argument in (-pi, pi].
  [[nodiscard]] double arg() const noexcept;
};

/// Single-input single-output state-space system
///   dx/dt = A x + B u,   y = C x + D u.
/// Matrices are stored row-major. Immutable after construction.
class LtiSystem {
 public:
  /// Throws ContractError if the shapes are inconsistent (A is n*n, B and C have n entries).
  LtiSystem(std::size_t n, std::vector<double> a, std::vector<double> b, std::vector<double> c, double d);

  /// One-state system with scalar coefficients.
  static LtiSystem scalar(double a, double b, double c, double d) { return {1, {a}, {b}, {c}, d}; }

  /// dx = -x - u, y = x + u. Transfer function s/(s+1).
  static LtiSystem washout() { return scalar(-1.0, -1.0, 1.0, 1.0); }

  [[nodiscard]] std::size_t order() const noexcept { return n_; }
  [[nodiscard]] double a(std::size_t row, std::size_t col) const { return a_[row * n_ + col]; }
  [[nodiscard]] std::span<const double> b() const noexcept { return b_; }
  [[nodiscard]] std::span<const double> c() const noexcept { return c_; }
  [[nodiscard]] double d() const noexcept { return d_; }

  /// dx = A x + B u into `dx`; returns y = C x + D u.
  /// Throws ContractError when x or dx do not have `order()` entries.
  double evaluate(std::span<const double> x, double u, std::span<double> dx) const;

  /// y = C x + D u
  [[nodiscard]] double output(std::span<const double> x, double u) const;

  /// Eigenvalues of A.
  [[nodiscard]] std::vector<ComplexValue> poles() const;

  /// Largest real part among the eigenvalues of A.
  [[nodiscard]] double spectral_abscissa() const;

  /// All eigenvalues strictly in the left half plane (max real part < -1e-9).
  [[nodiscard]] bool is_hurwitz() const;

  /// Equilibrium state -A^{-1} B u for a constant input. Throws SingularityError if A is singular.
  [[nodiscard]] std::vector<double> equilibrium(double u) const;

 private:
  std::size_t n_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  double d_;
};

inline constexpr double kHurwitzMargin = 1e-9;
inline constexpr double kPoleProximity = 1e-12;

struct LtiStep {
  std::vector<double> dx;
  double y = 0.0;
};

/// W(s) = C (sI - A)^{-1} B + D, solved as a 2n x 2n real linear system.
/// Throws SingularityError when s lies within 1e-12 of an eigenvalue of A.
[[nodiscard]] ComplexValue transfer_eval(const LtiSystem& sys, ComplexValue s);

/// |W(0)| <= tol
[[nodiscard]] bool has_zero_at_origin(const LtiSystem& sys, double tol);

struct SinusoidResponse {
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Asymptotic response to sin(omega t): amplitude |W(i omega)| and phase arg W(i omega).
/// Throws StabilityError if A is not Hurwitz.
[[nodiscard]] SinusoidResponse sinusoid_steady_state(const LtiSystem& sys, double omega);

[[nodiscard]] LtiStep lti_rhs(const LtiSystem& sys, std::span<const double> x, double u);

}  // namespace entrain
