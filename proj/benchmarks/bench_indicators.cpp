#include <benchmark/benchmark.h>

#include "pacq/ehvi.hpp"
#include "pacq/er2i.hpp"
#include "pacq/quadrature.hpp"
#include "pacq/r2_indicator.hpp"
#include "pacq/rng.hpp"

using namespace pacq;

namespace {

ApproximationSet random_front(std::size_t n, std::uint64_t seed) {
  // Points near the unit anti-diagonal so most survive Pareto filtering.
  Rng rng(seed);
  ApproximationSet A;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    A.points.push_back({x, 1.0 - x + rng.uniform(0.0, 0.05)});
  }
  return A;
}

TchebycheffParams unit_params() {
  TchebycheffParams p;
  p.utopian = {0.0, 0.0};
  p.reference = {1.0, 1.0};
  return p;
}

void BM_Hypervolume2D(benchmark::State& state) {
  const ApproximationSet A = random_front(static_cast<std::size_t>(state.range(0)), 1);
  const Vec r = {1.1, 1.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypervolume(A, r));
  }
}
BENCHMARK(BM_Hypervolume2D)->Arg(100)->Arg(1000)->Arg(10000);

void BM_EnvelopeBuild(benchmark::State& state) {
  const ApproximationSet A = random_front(static_cast<std::size_t>(state.range(0)), 2);
  const TchebycheffParams p = unit_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(envelope_piecewise_2d(A, p));
  }
}
BENCHMARK(BM_EnvelopeBuild)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ExactR2(benchmark::State& state) {
  const ApproximationSet A = random_front(static_cast<std::size_t>(state.range(0)), 3);
  const TchebycheffParams p = unit_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(r2_value_exact_2d(A, p, uniform_weight_density()));
  }
}
BENCHMARK(BM_ExactR2)->Arg(100)->Arg(1000)->Arg(10000);

void BM_EhviExact(benchmark::State& state) {
  const ApproximationSet A = random_front(static_cast<std::size_t>(state.range(0)), 4);
  IndependentGaussianPrediction pred;
  pred.marginals = {{0.4, 0.1}, {0.4, 0.1}};
  const Vec r = {1.1, 1.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ehvi_exact(pred, A, r));
  }
}
BENCHMARK(BM_EhviExact)->Arg(10)->Arg(100)->Arg(1000);

void BM_Er2iQuadrature(benchmark::State& state) {
  const ApproximationSet A = random_front(64, 5);
  const TchebycheffParams p = unit_params();
  const PiecewiseLinearEnvelope env = envelope_piecewise_2d(A, p);
  AchievementSurrogateView surr;
  surr.mean_at = [](const Vec& w) { return 0.3 * w[0] + 0.2; };
  surr.std_at = [](const Vec&) { return 0.05; };
  const SimplexQuadratureRule rule =
      simplex_rule_gauss_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(er2i_quadrature(surr, env, uniform_weight_density(), rule));
  }
}
BENCHMARK(BM_Er2iQuadrature)->Arg(32)->Arg(64)->Arg(128);

}  // namespace
