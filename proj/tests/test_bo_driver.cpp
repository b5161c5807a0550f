#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pacq/bo_driver.hpp"
#include "pacq/io.hpp"
#include "support.hpp"

using namespace pacq;
using namespace pacq::test;

namespace {

RunConfig benchmark_config(RunMode mode, std::uint64_t seed) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.weights = uniform_weights_2d(11);
  cfg.utopian = {0.0, 0.0};
  cfg.reference = {1.0, 1.0};
  cfg.budget = 30;
  cfg.n_initial = 5;
  cfg.seed = seed;
  cfg.acquisition_budget = 400;
  return cfg;
}

double dense_front_discrete_r2(std::size_t k) {
  ApproximationSet A;
  for (std::size_t i = 0; i < 4096; ++i) {
    const double x = static_cast<double>(i) / 4095.0;
    A.points.push_back({x * x, (1.0 - x) * (1.0 - x)});
  }
  TchebycheffParams p;
  p.utopian = {0.0, 0.0};
  p.reference = {1.0, 1.0};
  return discrete_r2(A, uniform_weights_2d(k), p);
}

}  // namespace

TEST_CASE("envelope updates") {
  EnvelopeState env;
  env.weights = uniform_weights_2d(3);
  env.incumbents = {0.5, 0.4, 0.6};

  EnvelopeState unchanged = env;
  CHECK(update_envelopes(unchanged, {0.9, 0.9, 0.9}) == 0);
  CHECK(unchanged.incumbents == env.incumbents);

  EnvelopeState all = env;
  CHECK(update_envelopes(all, {0.1, 0.2, 0.3}) == 3);
  CHECK(all.incumbents == std::vector<double>{0.1, 0.2, 0.3});

  EnvelopeState mixed = env;
  CHECK(update_envelopes(mixed, {0.45, 0.45, 0.45}) == 2);
  CHECK(mixed.incumbents == std::vector<double>{0.45, 0.4, 0.45});

  CHECK_THROWS_AS(update_envelopes(mixed, {0.1}), std::invalid_argument);
}

TEST_CASE("propose_next") {
  Box box;
  box.lower = {0.0};
  box.upper = {1.0};

  // Constant acquisition keeps the first probed candidate.
  const Vec first = propose_next([](const Vec&) { return 1.0; }, box, 100, 9);
  Rng rng(9);
  CHECK(first[0] == doctest::Approx(rng.uniform(0.0, 1.0)).epsilon(1e-15));

  // Unimodal quadratic: argmax within 1e-2 at a 10^3 budget.
  auto quad = [](const Vec& x) { return -(x[0] - 0.62) * (x[0] - 0.62); };
  const Vec best = propose_next(quad, box, 1000, 3);
  CHECK(std::abs(best[0] - 0.62) < 1e-2);

  // Deterministic per seed.
  CHECK(propose_next(quad, box, 500, 4)[0] == propose_next(quad, box, 500, 4)[0]);
}

TEST_CASE("discrete loop: budget equals initial design") {
  RunConfig cfg = benchmark_config(RunMode::discrete_er2i, 0);
  cfg.budget = cfg.n_initial;
  const RunHistory hist = run_discrete_er2i_loop(benchmark_biobjective(), cfg);
  REQUIRE(hist.records.size() == cfg.n_initial);

  // Envelopes equal the column minima of the initial achievements.
  TchebycheffParams p;
  p.utopian = cfg.utopian;
  p.reference = cfg.reference;
  for (std::size_t k = 0; k < cfg.weights.size(); ++k) {
    double h = 1e300;
    for (const auto& rec : hist.records) {
      h = std::min(h, tcheby_value(rec.objectives, cfg.weights[k], p));
    }
    CHECK(hist.records.back().envelope[k] == doctest::Approx(h).epsilon(1e-14));
  }
}

TEST_CASE("discrete loop: envelope traces and consistency") {
  const RunConfig cfg = benchmark_config(RunMode::discrete_er2i, 1);
  const RunHistory hist = run_discrete_er2i_loop(benchmark_biobjective(), cfg);
  REQUIRE(hist.records.size() == cfg.budget);
  REQUIRE_FALSE(hist.gp_failure);

  TchebycheffParams p;
  p.utopian = cfg.utopian;
  p.reference = cfg.reference;

  for (std::size_t i = 1; i < hist.records.size(); ++i) {
    for (std::size_t k = 0; k < cfg.weights.size(); ++k) {
      CHECK(hist.records[i].envelope[k] <= hist.records[i - 1].envelope[k] + 1e-14);
    }
    CHECK(hist.records[i].acquisition_value >= 0.0);
  }

  // Bookkeeping equals recomputation from scratch at the final iteration.
  ApproximationSet A;
  for (const auto& rec : hist.records) A.points.push_back(rec.objectives);
  for (std::size_t k = 0; k < cfg.weights.size(); ++k) {
    CHECK(hist.records.back().envelope[k] ==
          doctest::Approx(envelope_value(A, cfg.weights[k], p)).epsilon(1e-13));
  }
}

TEST_CASE("discrete loop: benchmark convergence over seeds") {
  const double target = dense_front_discrete_r2(11);
  int ok = 0;
  int improving = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RunHistory hist =
        run_discrete_er2i_loop(benchmark_biobjective(), benchmark_config(RunMode::discrete_er2i, seed));
    REQUIRE_FALSE(hist.gp_failure);
    const double last = hist.records.back().discrete_r2;
    if (std::abs(last - target) <= 0.1 * target) ++ok;
    bool mono = true;
    for (std::size_t i = 1; i < hist.records.size(); ++i) {
      for (std::size_t k = 0; k < hist.records[i].envelope.size(); ++k) {
        if (hist.records[i].envelope[k] > hist.records[i - 1].envelope[k] + 1e-12) {
          mono = false;
        }
      }
    }
    if (mono) ++improving;
  }
  CHECK(improving == 10);
  CHECK(ok >= 8);
}

TEST_CASE("proposals tend to improve an envelope entry") {
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RunConfig cfg = benchmark_config(RunMode::discrete_er2i, seed);
    cfg.budget = cfg.n_initial + 1;
    const RunHistory hist = run_discrete_er2i_loop(benchmark_biobjective(), cfg);
    REQUIRE(hist.records.size() == cfg.budget);
    const auto& before = hist.records[cfg.n_initial - 1].envelope;
    const auto& after = hist.records[cfg.n_initial].envelope;
    for (std::size_t k = 0; k < before.size(); ++k) {
      if (after[k] < before[k] - 1e-12) {
        ++improved;
        break;
      }
    }
  }
  CHECK(improved >= 16);
}

TEST_CASE("quadrature mode reuses the discrete loop") {
  RunConfig cfg = benchmark_config(RunMode::quadrature_er2i, 2);
  const SimplexQuadratureRule rule = simplex_rule_gauss_2d(16);
  cfg.weights = rule.nodes;
  cfg.weight_scales.assign(rule.weights.begin(), rule.weights.end());
  const RunHistory hist = run_discrete_er2i_loop(benchmark_biobjective(), cfg);
  REQUIRE(hist.records.size() == cfg.budget);
  REQUIRE_FALSE(hist.gp_failure);
}

TEST_CASE("ehvi loop on the benchmark") {
  // Dense-front dominated hypervolume target.
  ApproximationSet dense;
  for (std::size_t i = 0; i < 4096; ++i) {
    const double x = static_cast<double>(i) / 4095.0;
    dense.points.push_back({x * x, (1.0 - x) * (1.0 - x)});
  }
  const double target_hv = hypervolume(dense, {1.0, 1.0});

  int ok = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RunHistory hist =
        run_ehvi_loop(benchmark_biobjective(), benchmark_config(RunMode::ehvi, seed));
    REQUIRE_FALSE(hist.gp_failure);
    REQUIRE(hist.records.size() == 30);
    for (std::size_t i = 1; i < hist.records.size(); ++i) {
      CHECK(hist.records[i].hypervolume >= hist.records[i - 1].hypervolume - 1e-12);
      CHECK(hist.records[i].acquisition_value >= 0.0);
    }
    if (hist.records.back().hypervolume >= 0.95 * target_hv) ++ok;
  }
  CHECK(ok >= 8);
}

TEST_CASE("seed determinism of histories") {
  const RunConfig cfg = benchmark_config(RunMode::discrete_er2i, 7);
  const RunHistory a = run_discrete_er2i_loop(benchmark_biobjective(), cfg);
  const RunHistory b = run_discrete_er2i_loop(benchmark_biobjective(), cfg);
  std::ostringstream sa, sb;
  write_history_jsonl(sa, a);
  write_history_jsonl(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("config validation") {
  RunConfig cfg = benchmark_config(RunMode::discrete_er2i, 0);
  cfg.n_initial = 0;
  CHECK_THROWS_AS(run_discrete_er2i_loop(benchmark_biobjective(), cfg),
                  std::invalid_argument);
  cfg = benchmark_config(RunMode::ehvi, 0);
  CHECK_THROWS_AS(run_discrete_er2i_loop(benchmark_biobjective(), cfg),
                  std::invalid_argument);
  cfg = benchmark_config(RunMode::discrete_er2i, 0);
  cfg.weights.clear();
  CHECK_THROWS_AS(run_discrete_er2i_loop(benchmark_biobjective(), cfg),
                  std::invalid_argument);
}
