#include <doctest.h>

#include <array>
#include <cmath>

#include "entrain/blocks.hpp"
#include "entrain/error.hpp"
#include "entrain/scenario.hpp"
#include "support/oracles.hpp"

using namespace entrain;

namespace {

std::array<double, 5> random_state() {
  return {oracle::uniform(-10, 10), oracle::uniform(-2, 2), oracle::uniform(-20, 20), oracle::uniform(-20, 20),
          oracle::uniform(0, 50)};
}

}  // namespace

TEST_SUITE("blocks") {
  TEST_CASE("alpha_eval examples") {
    CHECK(alpha_eval(Saturation(0.1), 0.0) == 0.0);
    CHECK(alpha_eval(Saturation(0.1), 1.0) == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
    CHECK(alpha_eval(Saturation(0.0001), 0.1) == doctest::Approx(0.01 / 0.0101).epsilon(1e-15));
  }

  TEST_CASE("saturation parameter must be positive") {
    CHECK_THROWS_AS(Saturation(0.0), ParameterError);
    CHECK_THROWS_AS(Saturation(-0.1), ParameterError);
    CHECK_THROWS_AS(Saturation(std::nan("")), ParameterError);
    CHECK_THROWS_AS((void)compose_example1(-1.0), ParameterError);
    CHECK_THROWS_AS((void)compose_example2(0.0), ParameterError);
  }

  TEST_CASE("alpha is bounded, even and monotone in |y|") {
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
      const Saturation sat(std::pow(10.0, oracle::uniform(-5.0, 1.0)));
      const double y1 = oracle::uniform(-50.0, 50.0) * std::pow(10.0, oracle::uniform(-4.0, 0.0));
      const double y2 = oracle::uniform(-50.0, 50.0) * std::pow(10.0, oracle::uniform(-4.0, 0.0));
      const double a1 = sat(y1);
      const double a2 = sat(y2);
      if (!(a1 >= 0.0 && a1 < 1.0)) ++failures;
      if (sat(-y1) != a1) ++failures;
      if (std::abs(y2) >= std::abs(y1) && !(a2 >= a1)) ++failures;
      if (std::abs(y1) >= std::abs(y2) && !(a1 >= a2)) ++failures;
    }
    CHECK(failures == 0);
  }

  TEST_CASE("lag_rhs examples") {
    CHECK(lag_rhs(0.0, 1.0) == 1.0);
    CHECK(lag_rhs(1.0, 1.0) == 0.0);
    CHECK(lag_rhs(-0.98, 0.0) == doctest::Approx(0.98));
  }

  TEST_CASE("lorenz_rhs examples") {
    const LorenzParams d;
    CHECK(lorenz_rhs(d, std::vector<double>{0, 0, 0}) == std::vector<double>{0, 0, 0});
    CHECK(lorenz_rhs(d, std::vector<double>{1, 0, 0}) == std::vector<double>{-10, 28, 0});
    const auto r = lorenz_rhs(d, std::vector<double>{1, 1, 1});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 26.0);
    CHECK(r[2] == doctest::Approx(-5.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)lorenz_rhs(d, std::vector<double>{1, 2}), ContractError);
  }

  TEST_CASE("compose_example1 layout and rhs") {
    const auto sys = compose_example1();
    CHECK(sys.dim() == 5);
    CHECK(sys.scenario_id() == "example1");
    CHECK(sys.layout().names == std::vector<std::string>{"x", "p", "xi", "psi", "zeta"});
    CHECK(*sys.layout().p == 1);
    CHECK(sys.layout().index_of("zeta") == 4);
    CHECK_THROWS_AS((void)sys.layout().index_of("w"), UnknownVariableError);

    auto r = sys.rhs(0.0, std::vector<double>{5, 0, 1, 0, 0}, 0.0);
    CHECK(r[0] == -5.0);
    CHECK(r[1] == doctest::Approx(25.0 / 25.1).epsilon(1e-15));
    CHECK(r[2] == 0.0);
    CHECK(r[3] == 0.0);
    CHECK(r[4] == 0.0);

    r = sys.rhs(0.0, std::vector<double>{0, 1, 1, 1, 1}, 0.0);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == -1.0);
    CHECK(r[2] == 0.0);
    CHECK(r[3] == 26.0);
    CHECK(r[4] == doctest::Approx(-5.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("example1 equilibrium set: x = -u0, p = 0, any z") {
    const auto sys = compose_example1();
    for (int i = 0; i < 100; ++i) {
      const double u0 = oracle::uniform(-10, 10);
      auto st = random_state();
      st[0] = -u0;
      st[1] = 0.0;
      for (double v : sys.rhs(0.0, st, u0)) CHECK(v == 0.0);
      st[1] = 0.3;
      const auto moving = sys.rhs(0.0, st, u0);
      CHECK((moving[2] != 0.0 || moving[3] != 0.0 || moving[4] != 0.0));
    }
  }

  TEST_CASE("compose_example2 limits") {
    const auto sys = compose_example2();
    CHECK(sys.scenario_id() == "example2");
    CHECK(sys.saturation()->k() == 0.0001);
    for (int i = 0; i < 100; ++i) {
      auto st = random_state();
      const double u = oracle::uniform(-10, 10);
      const double xi = st[2], psi = st[3], zeta = st[4];

      st[1] = 0.0;
      auto r = sys.rhs(0.0, st, u);
      CHECK(r[2] == doctest::Approx(10.0 * (psi - xi)));
      CHECK(r[3] == doctest::Approx(-psi));
      CHECK(r[4] == doctest::Approx(-(8.0 / 3.0) * zeta));

      st[1] = 1.0;
      r = sys.rhs(0.0, st, u);
      const auto lz = lorenz_rhs({}, std::vector<double>{xi, psi, zeta});
      for (int k = 0; k < 3; ++k) CHECK(r[2 + k] == doctest::Approx(lz[k]).epsilon(1e-13));
    }
  }

  TEST_CASE("example2 rhs at the preset initial state") {
    const auto r = compose_example2().rhs(0.0, std::vector<double>{2.95, -0.98, 0.94, -4.07, 4.89}, 1.89);
    // Substituted by hand (double arithmetic, independent script).
    CHECK(r[0] == doctest::Approx(-4.84).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(1.9799957311841268).epsilon(1e-14));
    CHECK(r[2] == doctest::Approx(-50.1).epsilon(1e-14));
    CHECK(r[3] == doctest::Approx(-17.218932).epsilon(1e-14));
    CHECK(r[4] == doctest::Approx(-9.290716).epsilon(1e-14));
  }

  TEST_CASE("example2 origin is an exact equilibrium for constant input") {
    const auto sys = compose_example2();
    for (double u0 : {-10.0, -3.3, 0.0, 1.89, 5.13, 10.0}) {
      for (double v : sys.rhs(0.0, std::vector<double>{-u0, 0, 0, 0, 0}, u0)) CHECK(v == 0.0);
    }
  }

  TEST_CASE("compose_general reproduces example1 bit for bit") {
    const auto general = compose_general(LtiSystem::washout(), Saturation(0.1), lorenz_field());
    const auto ex1 = compose_example1();
    CHECK(general.dim() == 5);
    CHECK(general.layout().names == ex1.layout().names);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const auto st = random_state();
      const double u = oracle::uniform(-10, 10);
      const auto a = general.rhs(0.0, st, u);
      const auto b = ex1.rhs(0.0, st, u);
      for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    CHECK(worst <= 1e-14);
  }

  TEST_CASE("compose_general edge cases") {
    VectorField frozen{1, [](std::span<const double>, std::span<double> dz) { dz[0] = 0.0; }, {}};
    const auto sys = compose_general(LtiSystem::washout(), Saturation(0.1), frozen);
    CHECK(sys.layout().names == std::vector<std::string>{"x", "p", "z1"});
    for (double p : {-1.0, 0.0, 0.5, 3.0}) CHECK(sys.rhs(0.0, std::vector<double>{1.0, p, 4.0}, 2.0)[2] == 0.0);

    CHECK_THROWS_AS((void)compose_general(LtiSystem::scalar(1.0, -1.0, 1.0, 1.0), Saturation(0.1), lorenz_field()),
                    ConstructionError);
    CHECK_THROWS_AS((void)compose_general(LtiSystem::scalar(-1.0, 1.0, 1.0, 0.0), Saturation(0.1), lorenz_field()),
                    ConstructionError);
    CHECK_THROWS_AS((void)compose_general(LtiSystem::washout(), Saturation(0.1), VectorField{}), ConstructionError);
  }

  TEST_CASE("compose_general with a higher-order filter") {
    // Band-pass s / (s^2 + 3 s + 2): W(0) = 0, poles -1 and -2.
    const LtiSystem bp(2, {0.0, 1.0, -2.0, -3.0}, {0.0, 1.0}, {0.0, 1.0}, 0.0);
    const auto sys = compose_general(bp, Saturation(0.1), lorenz_field());
    CHECK(sys.dim() == 6);
    CHECK(sys.layout().names == std::vector<std::string>{"x1", "x2", "p", "xi", "psi", "zeta"});
    const auto r = sys.rhs(0.0, std::vector<double>{0.5, -1.0, 0.25, 1, 1, 1}, 2.0);
    CHECK(r[0] == -1.0);
    CHECK(r[1] == doctest::Approx(-2.0 * 0.5 + 3.0 + 2.0));
    CHECK(r[2] == doctest::Approx(-0.25 + 1.0 / 1.1));
    CHECK(r[4] == doctest::Approx(0.25 * 26.0));
  }

  TEST_CASE("compose_interpolated") {
    const auto f0 = damped_linear_field();
    const auto f1 = lorenz_field();
    const auto sys = compose_interpolated(LtiSystem::washout(), Saturation(1e-4), f0, f1);
    for (int i = 0; i < 50; ++i) {
      auto st = random_state();
      const std::vector<double> z{st[2], st[3], st[4]};
      st[1] = 0.0;
      auto r = sys.rhs(0.0, st, 1.0);
      auto ref = f0(z);
      for (int k = 0; k < 3; ++k) CHECK(r[2 + k] == doctest::Approx(ref[k]).epsilon(1e-14));
      st[1] = 1.0;
      r = sys.rhs(0.0, st, 1.0);
      ref = f1(z);
      for (int k = 0; k < 3; ++k) CHECK(r[2 + k] == doctest::Approx(ref[k]).epsilon(1e-14));
    }

    // f0 == f1: independent of p
    const auto same = compose_interpolated(LtiSystem::washout(), Saturation(0.1), f1, f1);
    const auto a = same.rhs(0.0, std::vector<double>{0, 0.2, 1, 2, 3}, 0.0);
    const auto b = same.rhs(0.0, std::vector<double>{0, 0.9, 1, 2, 3}, 0.0);
    for (int k = 2; k < 5; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-14));

    // p = 0.5, f0 = -z, f1 = +z cancel
    VectorField neg{1, [](std::span<const double> z, std::span<double> dz) { dz[0] = -z[0]; }, {}};
    VectorField pos{1, [](std::span<const double> z, std::span<double> dz) { dz[0] = z[0]; }, {}};
    const auto cancel = compose_interpolated(LtiSystem::washout(), Saturation(0.1), neg, pos);
    CHECK(cancel.rhs(0.0, std::vector<double>{0.3, 0.5, 7.0}, 1.0)[2] == 0.0);

    VectorField two{2, [](std::span<const double>, std::span<double> dz) { dz[0] = dz[1] = 0; }, {}};
    CHECK_THROWS_AS((void)compose_interpolated(LtiSystem::washout(), Saturation(0.1), pos, two), ConstructionError);
  }

  TEST_CASE("interpolating damped linear and Lorenz fields is example2") {
    const auto interp = make_scenario_system("interp-lorenz", 1e-4);
    const auto ex2 = compose_example2();
    CHECK(interp.scenario_id() == "interp-lorenz");
    for (int i = 0; i < 100; ++i) {
      const auto st = random_state();
      const double u = oracle::uniform(-10, 10);
      const auto a = interp.rhs(0.0, st, u);
      const auto b = ex2.rhs(0.0, st, u);
      for (int k = 0; k < 5; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("composed rhs checks dimensions") {
    const auto sys = compose_example1();
    std::vector<double> out(5);
    CHECK_THROWS_AS(sys.rhs(0.0, std::vector<double>{1, 2, 3}, 0.0, out), ContractError);
  }
}
