#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "entrain/diagnostics.hpp"
#include "entrain/error.hpp"

namespace entrain {

namespace {

MonteCarloRun run_one(const ComposedSystem& sys, const InputSignal& input, std::span<const double> x0,
                      const IntegratorConfig& cfg, const VerdictOptions& opts) {
  MonteCarloRun run;
  try {
    const auto rep = entrainment_verdict(sys, input, x0, cfg, opts);
    run.verdict = rep.verdict;
    run.lambda = rep.lyapunov.lambda_max;
    if (rep.p_tail) run.p_tail_mean = rep.p_tail->mean;
    run.final_state = rep.steady.final_state;
  } catch (const DivergenceError& e) {
    run.error = e.what();
  } catch (const StiffnessError& e) {
    run.error = e.what();
  } catch (const BudgetError& e) {
    run.error = e.what();
  }
  return run;
}

}  // namespace

std::vector<double> monte_carlo_draw(std::uint64_t seed, std::int64_t sample, std::size_t count, double lo,
                                     double hi) {
  const auto s = static_cast<std::uint64_t>(sample);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  std::mt19937_64 gen(seq);
  std::vector<double> out(count);
  for (auto& v : out) {
    // 53 random bits -> [0, 1); avoids the library-specific uniform_real_distribution.
    const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = lo + (hi - lo) * unit;
  }
  return out;
}

std::vector<MonteCarloRow> monte_carlo(const ComposedSystem& sys, std::int64_t n_samples, std::uint64_t seed,
                                       const IntegratorConfig& cfg, const MonteCarloOptions& opts) {
  if (n_samples < 1) throw ParameterError("Monte Carlo needs at least one sample");
  if (!(opts.range_hi > opts.range_lo)) throw ParameterError("Monte Carlo range must be non-empty");
  cfg.validate();

  const std::size_t dim = sys.dim();
  std::vector<MonteCarloRow> rows(static_cast<std::size_t>(n_samples));
  for (std::int64_t i = 0; i < n_samples; ++i) {
    auto draw = monte_carlo_draw(seed, i, dim + 1, opts.range_lo, opts.range_hi);
    auto& row = rows[static_cast<std::size_t>(i)];
    row.sample = i;
    row.u0 = draw.front();
    row.x0.assign(draw.begin() + 1, draw.end());
  }

  const InputSignal periodic = InputSignal::sinusoid(1.0, 1.0, 0.0);
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= n_samples) return;
      auto& row = rows[static_cast<std::size_t>(i)];
      try {
        row.constant = run_one(sys, InputSignal::constant(row.u0), row.x0, cfg, opts.verdict);
        row.periodic = run_one(sys, periodic, row.x0, cfg, opts.verdict);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_samples);
      }
    }
  };

  const unsigned jobs = std::clamp<unsigned>(opts.jobs, 1U, static_cast<unsigned>(n_samples));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

MonteCarloSummary summarize(std::span<const MonteCarloRow> rows) {
  MonteCarloSummary s;
  s.samples = static_cast<std::int64_t>(rows.size());
  for (const auto& r : rows) {
    if (r.constant.diverged())
      ++s.const_divergent;
    else if (*r.constant.verdict == Verdict::steady_state)
      ++s.const_steady;
    if (r.periodic.diverged()) {
      ++s.sin_divergent;
      continue;
    }
    switch (*r.periodic.verdict) {
      case Verdict::steady_state:
        ++s.sin_steady;
        break;
      case Verdict::chaotic_like:
        ++s.sin_chaotic;
        break;
      case Verdict::sustained_oscillation:
        ++s.sin_oscillation;
        break;
      case Verdict::inconclusive:
        ++s.sin_inconclusive;
        break;
    }
  }
  return s;
}

}  // namespace entrain
