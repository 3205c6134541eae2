// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "entrain/entrain.hpp"
#include "support/oracles.hpp"

using namespace entrain;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kExample1X0{5, 0, 1, 0, 0};
const std::vector<double> kExample2X0{2.95, -0.98, 0.94, -4.07, 4.89};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [failed]";
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Trajectory simulate(const ComposedSystem& sys, const InputSignal& in, const std::vector<double>& x0, double t_end) {
  return integrate(sys, in, x0, {0.0, t_end}, {}, OutputGrid::uniform({0.0, t_end}, 0.01));
}

double z_norm(std::span<const double> s) { return std::sqrt(s[2] * s[2] + s[3] * s[3] + s[4] * s[4]); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  Outcome o;
  const auto sys = compose_example1();

  auto t0 = std::chrono::steady_clock::now();
  const auto steady = detect_steady_state(simulate(sys, InputSignal::constant(10.0), kExample1X0, 100.0));
  const double t_a = seconds_since(t0);
  o.require(steady.converged, "const 10 converged");
  o.require(steady.max_component_variation < 1e-5,
            "tail variation " + num(steady.max_component_variation) + " < 1e-5");
  o.require(t_a < 10.0, "(a) " + num(t_a) + " s < 10 s");

  t0 = std::chrono::steady_clock::now();
  const auto forced = detect_steady_state(simulate(sys, InputSignal::sinusoid(), kExample1X0, 200.0));
  const auto est = lyapunov_max(sys, InputSignal::sinusoid(), kExample1X0, {});
  const double t_b = seconds_since(t0);
  o.require(!forced.converged, "sin t not converged");
  o.require(est.lambda_max > 0.05, "lambda_max " + num(est.lambda_max) + " > 0.05");
  o.require(t_b < 10.0, "(b) " + num(t_b) + " s < 10 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto sys = compose_example2();
  const auto c = simulate(sys, InputSignal::constant(5.13), kExample2X0, 100.0);
  const auto steady = detect_steady_state(c);
  const auto p_const = tail_stats(c, "p");
  o.require(steady.converged, "const 5.13 converged");
  o.require(z_norm(steady.final_state) < 1e-3, "|z_final| " + num(z_norm(steady.final_state)) + " < 1e-3");
  o.require(p_const.mean < 0.05, "p tail mean " + num(p_const.mean) + " < 0.05");

  const auto p_sin = tail_stats(simulate(sys, InputSignal::sinusoid(), kExample2X0, 100.0), "p");
  o.require(p_sin.mean > 0.9, "sin t p tail mean " + num(p_sin.mean) + " > 0.9");
  const auto verdict = entrainment_verdict(sys, InputSignal::sinusoid(), kExample2X0, {});
  o.require(verdict.verdict != Verdict::steady_state, std::string("sin t verdict ") + std::string(to_string(verdict.verdict)));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = monte_carlo(compose_example2(), 20, 42, {});
  const double elapsed = seconds_since(t0);
  int const_ok = 0, sin_not_steady = 0;
  for (const auto& row : rows) {
    if (row.constant.verdict == Verdict::steady_state && z_norm(row.constant.final_state) < 1e-3) ++const_ok;
    if (row.periodic.verdict && *row.periodic.verdict != Verdict::steady_state) ++sin_not_steady;
  }
  o.require(const_ok == 20, "const steady at origin " + std::to_string(const_ok) + "/20");
  o.require(sin_not_steady >= 18, "sin t not steady " + std::to_string(sin_not_steady) + "/20 >= 18");
  o.require(elapsed < 300.0, num(elapsed) + " s < 300 s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto sys = compose_autonomous(lorenz_field(), "lorenz");
  const std::vector<double> z0{1.0, 1.0, 1.0};
  LyapunovOptions half, quarter;
  half.renorm_dt = 0.5;
  quarter.renorm_dt = 0.25;
  const double l_half = lyapunov_max(sys, InputSignal::constant(0.0), z0, {}, half).lambda_max;
  const double l_quarter = lyapunov_max(sys, InputSignal::constant(0.0), z0, {}, quarter).lambda_max;
  const double reference = oracle::lorenz_lyapunov_tangent();
  o.require(std::abs(l_half - 0.906) <= 0.1, "lambda " + num(l_half) + " = 0.906 +- 0.1");
  o.require(std::abs(reference - 0.906) <= 0.1, "tangent oracle " + num(reference));
  o.require((l_half > 0) == (l_quarter > 0), "sign stable (dt 0.25: " + num(l_quarter) + ")");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto filter = *compose_example1().filter();
  const auto w0 = transfer_eval(filter, {0.0, 0.0});
  const auto wi = transfer_eval(filter, {0.0, 1.0});
  const auto ref = oracle::washout_transfer({0.0, 1.0});
  o.require(w0.abs() < 1e-12, "|W(0)| " + num(w0.abs()) + " < 1e-12");
  // 0.70711 is 1/sqrt(2) rounded to five places; the 1e-6 band is taken around the closed form.
  o.require(std::abs(wi.abs() - 1.0 / std::sqrt(2.0)) <= 1e-6, "|W(i)| " + num(wi.abs()) + " = 1/sqrt(2) +- 1e-6");
  o.require(std::abs(std::complex<double>(wi.re, wi.im) - ref) <= 1e-12, "W(i) matches s/(s+1)");
  return o;
}

Outcome criterion6() {
  Outcome o;

  int alpha_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Saturation sat(std::pow(10.0, oracle::uniform(-5.0, 1.0)));
    const double y1 = oracle::uniform(-50.0, 50.0);
    const double y2 = oracle::uniform(-50.0, 50.0);
    const double a1 = sat(y1), a2 = sat(y2);
    if (!(a1 >= 0.0 && a1 < 1.0) || sat(-y1) != a1) ++alpha_bad;
    if (std::abs(y2) > std::abs(y1) && a2 < a1) ++alpha_bad;
  }
  o.require(alpha_bad == 0, "alpha properties over 1e4 samples");

  // p = c constant versus the unscaled field at time c t.
  const double c = 0.5;
  const auto f = lorenz_field();
  const VectorField scaled{3,
                           [&f, c](std::span<const double> z, std::span<double> dz) {
                             f.rhs(z, dz);
                             for (auto& v : dz) v *= c;
                           },
                           f.names};
  const std::vector<double> z0{1.0, 1.0, 1.0};
  IntegratorConfig cfg;
  double worst_units = 0.0;
  const auto slow = integrate(compose_autonomous(scaled, "scaled"), InputSignal::constant(0.0), z0, {0.0, 10.0}, cfg,
                              OutputGrid::uniform({0.0, 10.0}, 1.0));
  for (std::size_t i = 0; i < slow.size(); ++i) {
    const double t = slow.times()[i];
    const auto fast = integrate(compose_autonomous(f, "lorenz"), InputSignal::constant(0.0), z0, {0.0, c * t}, cfg,
                                OutputGrid::endpoints({0.0, c * t}));
    for (std::size_t k = 0; k < 3; ++k)
      worst_units = std::max(worst_units, std::abs(slow.at(i, k) - fast.back()[k]) /
                                              (cfg.abs_tol + cfg.rel_tol * std::abs(fast.back()[k])));
  }
  o.require(worst_units <= 10.0, "time rescaling within " + num(worst_units) + " tol units");

  Layout l;
  l.z_size = 1;
  l.names = {"x"};
  const ComposedSystem decay("decay", l, [](double, std::span<const double> s, double, std::span<double> d) { d[0] = -s[0]; });
  auto rk4_error = [&](double h) {
    IntegratorConfig fixed;
    fixed.method = Method::rk4_fixed;
    fixed.h_init = h;
    const auto traj = integrate(decay, InputSignal::constant(0.0), std::vector<double>{1.0}, {0.0, 1.0}, fixed,
                                OutputGrid::endpoints({0.0, 1.0}));
    return std::abs(traj.back()[0] - std::exp(-1.0));
  };
  const double ratio = rk4_error(0.1) / rk4_error(0.05);
  o.require(ratio >= 12.0 && ratio <= 20.0, "rk4 ratio " + num(ratio));

  const auto general = compose_general(LtiSystem::washout(), Saturation(0.1), lorenz_field());
  const auto ex1 = compose_example1();
  double worst_rhs = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> st(5);
    for (auto& v : st) v = oracle::uniform(-20.0, 20.0);
    const double u = oracle::uniform(-10.0, 10.0);
    const auto a = general.rhs(0.0, st, u);
    const auto b = ex1.rhs(0.0, st, u);
    for (std::size_t k = 0; k < 5; ++k) worst_rhs = std::max(worst_rhs, std::abs(a[k] - b[k]));
  }
  o.require(worst_rhs <= 1e-14, "general vs example1 rhs " + num(worst_rhs));

  const auto ex2 = compose_example2();
  double worst_origin = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double u0 = oracle::uniform(-10.0, 10.0);
    for (double v : ex2.rhs(0.0, std::vector<double>{-u0, 0, 0, 0, 0}, u0)) worst_origin = std::max(worst_origin, std::abs(v));
  }
  o.require(worst_origin == 0.0, "example2 origin residual " + num(worst_origin));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "entrain_acceptance_repro";
  fs::remove_all(root);
  auto cli = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    return cli::run(args, out, err);
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const int first = cli({"simulate", "--scenario", "example1", "--input", "sin:1:1", "--t-end", "50", "--out-dir",
                         (root / "seed").string()});
  o.require(first == 0, "initial run");
  const auto manifest = (root / "seed" / "example1.manifest.json").string();
  const int a = cli({"simulate", "--manifest", manifest, "--out-dir", (root / "a").string()});
  const int b = cli({"simulate", "--manifest", manifest, "--out-dir", (root / "b").string()});
  o.require(a == 0 && b == 0, "manifest runs");
  const auto csv_a = slurp(root / "a" / "example1.trajectory.csv");
  const auto csv_b = slurp(root / "b" / "example1.trajectory.csv");
  o.require(!csv_a.empty() && csv_a == csv_b, "identical CSV bytes (" + std::to_string(csv_a.size()) + " bytes)");
  o.require(csv_a == slurp(root / "seed" / "example1.trajectory.csv"), "matches the original run");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"example1 dichotomy", criterion1},       {"example2 dichotomy", criterion2},
      {"Monte Carlo sweep", criterion3},        {"Lorenz Lyapunov exponent", criterion4},
      {"washout transfer function", criterion5}, {"property suites", criterion6},
      {"manifest reproducibility", criterion7},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
