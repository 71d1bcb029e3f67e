#include <benchmark/benchmark.h>

#include "mlpoisson/combinatorics.hpp"
#include "mlpoisson/distributions/generalized.hpp"
#include "mlpoisson/distributions/standard.hpp"
#include "mlpoisson/fitting/fit.hpp"
#include "mlpoisson/gamma.hpp"
#include "mlpoisson/mittag_leffler.hpp"

namespace {

using namespace mlpoisson;

void BM_ReciprocalGamma(benchmark::State& state) {
  double x = -7.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reciprocal_gamma(x));
    x = x > 40.0 ? -7.3 : x + 0.37;
  }
}
BENCHMARK(BM_ReciprocalGamma);

// Argument is x; the series is summed outward from its dominant term.
void BM_MittagLefflerPositive(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml_eval_scaled({0.755, 10.40}, x));
  }
}
BENCHMARK(BM_MittagLefflerPositive)->Arg(5)->Arg(100)->Arg(10'000)->Arg(1'000'000);

// Alternating sums; the larger arguments cancel and switch to MPFR.
void BM_MittagLefflerNegative(benchmark::State& state) {
  const double x = -static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml_eval_scaled({0.5, 1.0}, x));
  }
}
BENCHMARK(BM_MittagLefflerNegative)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_EulerDerivatives(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml_euler_derivatives({0.8, 2.0}, 1e4, n));
  }
}
BENCHMARK(BM_EulerDerivatives)->Arg(2)->Arg(6)->Arg(20);

void BM_DerivativeParameterShift(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ml_derivative_scaled({0.8, 2.0}, 5.0, n, {}, DerivativeMethod::parameter_shift));
  }
}
BENCHMARK(BM_DerivativeParameterShift)->Arg(2)->Arg(6);

void BM_StirlingTable(benchmark::State& state) {
  for (auto _ : state) {
    StirlingTable t(kMaxStirlingRow);
    benchmark::DoNotOptimize(t(kMaxStirlingRow, 32));
  }
}
BENCHMARK(BM_StirlingTable);

void BM_GfpdPmfTable(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfpd_pmf_table({5.0, 0.755, 10.40}, 1e-12));
  }
}
BENCHMARK(BM_GfpdPmfTable);

void BM_GfpdRawMoments(benchmark::State& state) {
  const GeneralizedPoisson d({5.0, 0.755, 10.40});
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.raw_moments(n));
  }
}
BENCHMARK(BM_GfpdRawMoments)->Arg(2)->Arg(6)->Arg(20);

// Argument is 10 * alpha_s; smaller orders cancel harder.
void BM_SfpdPmfRange(benchmark::State& state) {
  const double alpha_s = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sfpd_pmf_range({alpha_s, 1.0, 5.0}, 0, 25));
  }
}
BENCHMARK(BM_SfpdPmfRange)->Arg(9)->Arg(5)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FitLeastSquares(benchmark::State& state) {
  FitConfig cfg;
  cfg.alpha0 = 0.5;
  cfg.seed_from_moments = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_least_squares({0.5, 1.0, 5.0}, cfg));
  }
}
BENCHMARK(BM_FitLeastSquares)->Unit(benchmark::kMillisecond);

void BM_FitMomentMatch(benchmark::State& state) {
  FitConfig cfg;
  cfg.method = FitMethod::moment_match;
  cfg.alpha0 = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_moment_match({0.5, 1.0, 5.0}, cfg));
  }
}
BENCHMARK(BM_FitMomentMatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
