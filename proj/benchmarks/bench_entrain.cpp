#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "entrain/entrain.hpp"

using namespace entrain;

namespace {

const std::vector<double> kExample1X0{5, 0, 1, 0, 0};

void BM_Example1Rhs(benchmark::State& state) {
  const auto sys = compose_example1();
  std::vector<double> out(5);
  double u = 0.3;
  for (auto _ : state) {
    sys.rhs(0.0, kExample1X0, u, out);
    benchmark::DoNotOptimize(out.data());
    u += 1e-9;
  }
}
BENCHMARK(BM_Example1Rhs);

void BM_GeneralRhs(benchmark::State& state) {
  const auto sys = compose_general(LtiSystem::washout(), Saturation(0.1), lorenz_field());
  std::vector<double> out(5);
  for (auto _ : state) {
    sys.rhs(0.0, kExample1X0, 0.3, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_GeneralRhs);

void BM_Integrate(benchmark::State& state) {
  const auto sys = compose_example1();
  const auto input = InputSignal::sinusoid();
  IntegratorConfig cfg;
  cfg.method = state.range(0) == 0 ? Method::rk45_adaptive : Method::rk4_fixed;
  cfg.h_init = 1e-3;
  for (auto _ : state) {
    auto traj = integrate(sys, input, kExample1X0, {0.0, 50.0}, cfg, OutputGrid::uniform({0.0, 50.0}, 0.01));
    benchmark::DoNotOptimize(traj.back().data());
  }
  state.SetLabel(std::string(to_string(cfg.method)));
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LyapunovLorenz(benchmark::State& state) {
  const auto sys = compose_autonomous(lorenz_field(), "lorenz");
  const std::vector<double> z0{1.0, 1.0, 1.0};
  for (auto _ : state) {
    const auto est = lyapunov_max(sys, InputSignal::constant(0.0), z0, {});
    benchmark::DoNotOptimize(est.lambda_max);
  }
}
BENCHMARK(BM_LyapunovLorenz)->Unit(benchmark::kMillisecond);

void BM_Verdict(benchmark::State& state) {
  const auto sys = compose_example1();
  const auto input = state.range(0) == 0 ? InputSignal::constant(10.0) : InputSignal::sinusoid();
  for (auto _ : state) {
    const auto r = entrainment_verdict(sys, input, kExample1X0, {});
    benchmark::DoNotOptimize(r.verdict);
  }
}
BENCHMARK(BM_Verdict)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
