#include "entrain/lti.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "entrain/error.hpp"

namespace entrain {

namespace {

Eigen::MatrixXd to_matrix(const LtiSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.order());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = sys.a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return a;
}

}  // namespace

double ComplexValue::abs() const noexcept { return std::hypot(re, im); }

double ComplexValue::arg() const noexcept {
  const double phi = std::atan2(im, re);
  return phi <= -std::numbers::pi ? std::numbers::pi : phi;
}

LtiSystem::LtiSystem(std::size_t n, std::vector<double> a, std::vector<double> b, std::vector<double> c, double d)
    : n_(n), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
  if (n_ == 0) throw ContractError("LTI system needs at least one state");
  if (a_.size() != n_ * n_) throw ContractError("A must be " + std::to_string(n_) + "x" + std::to_string(n_));
  if (b_.size() != n_) throw ContractError("B must be a column of length " + std::to_string(n_));
  if (c_.size() != n_) throw ContractError("C must be a row of length " + std::to_string(n_));
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(a_.begin(), a_.end(), finite) || !std::all_of(b_.begin(), b_.end(), finite) ||
      !std::all_of(c_.begin(), c_.end(), finite) || !std::isfinite(d_))
    throw ParameterError("LTI matrices must be finite");
}

double LtiSystem::evaluate(std::span<const double> x, double u, std::span<double> dx) const {
  if (x.size() != n_ || dx.size() != n_) throw ContractError("LTI state has wrong dimension");
  double y = d_ * u;
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = b_[i] * u;
    for (std::size_t j = 0; j < n_; ++j) acc += a_[i * n_ + j] * x[j];
    dx[i] = acc;
    y += c_[i] * x[i];
  }
  return y;
}

double LtiSystem::output(std::span<const double> x, double u) const {
  if (x.size() != n_) throw ContractError("LTI state has wrong dimension");
  double y = d_ * u;
  for (std::size_t i = 0; i < n_; ++i) y += c_[i] * x[i];
  return y;
}

std::vector<ComplexValue> LtiSystem::poles() const {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_matrix(*this), false);
  std::vector<ComplexValue> out;
  out.reserve(n_);
  for (const auto& ev : es.eigenvalues()) out.push_back({ev.real(), ev.imag()});
  return out;
}

double LtiSystem::spectral_abscissa() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : poles()) m = std::max(m, p.re);
  return m;
}

bool LtiSystem::is_hurwitz() const { return spectral_abscissa() < -kHurwitzMargin; }

std::vector<double> LtiSystem::equilibrium(double u) const {
  const auto a = to_matrix(*this);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw SingularityError("A is singular; no unique equilibrium");
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) rhs(static_cast<Eigen::Index>(i)) = -b_[i] * u;
  const Eigen::VectorXd x = lu.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

ComplexValue transfer_eval(const LtiSystem& sys, ComplexValue s) {
  if (!std::isfinite(s.re) || !std::isfinite(s.im)) throw ParameterError("evaluation point must be finite");
  for (const auto& p : sys.poles()) {
    if (std::hypot(s.re - p.re, s.im - p.im) <= kPoleProximity)
      throw SingularityError("s = " + std::to_string(s.re) + "+" + std::to_string(s.im) +
                             "i is an eigenvalue of A");
  }

  // [sr I - A, -si I; si I, sr I - A] [vr; vi] = [B; 0]
  const auto n = static_cast<Eigen::Index>(sys.order());
  const Eigen::MatrixXd a = to_matrix(sys);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = s.re * eye - a;
  m.topRightCorner(n, n) = -s.im * eye;
  m.bottomLeftCorner(n, n) = s.im * eye;
  m.bottomRightCorner(n, n) = s.re * eye - a;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) rhs(i) = sys.b()[static_cast<std::size_t>(i)];

  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw SingularityError("sI - A is numerically singular");
  const Eigen::VectorXd v = lu.solve(rhs);

  ComplexValue w{sys.d(), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ci = sys.c()[static_cast<std::size_t>(i)];
    w.re += ci * v(i);
    w.im += ci * v(n + i);
  }
  return w;
}

bool has_zero_at_origin(const LtiSystem& sys, double tol) { return transfer_eval(sys, {0.0, 0.0}).abs() <= tol; }

SinusoidResponse sinusoid_steady_state(const LtiSystem& sys, double omega) {
  if (!sys.is_hurwitz())
    throw StabilityError("A is not Hurwitz (spectral abscissa " + std::to_string(sys.spectral_abscissa()) +
                         "); sinusoidal steady state undefined");
  const auto w = transfer_eval(sys, {0.0, omega});
  return {w.abs(), w.arg()};
}

LtiStep lti_rhs(const LtiSystem& sys, std::span<const double> x, double u) {
  LtiStep out;
  out.dx.resize(sys.order());
  out.y = sys.evaluate(x, u, out.dx);
  return out;
}

}  // namespace entrain
