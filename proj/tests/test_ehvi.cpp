#include <doctest.h>

#include <cmath>

#include "pacq/ehvi.hpp"
#include "support.hpp"

using namespace pacq;
using namespace pacq::test;

namespace {

IndependentGaussianPrediction gauss2(double m1, double s1, double m2, double s2) {
  IndependentGaussianPrediction p;
  p.marginals = {{m1, s1}, {m2, s2}};
  return p;
}

}  // namespace

TEST_CASE("phvi transform degenerate limits") {
  // sigma -> 0: transforms reduce to plain clipped distances.
  const auto pred = gauss2(0.0, 0.0, 0.0, 0.0);
  const ApproximationSet A = make_set({{0.5, 0.5}});
  const PhviInstance inst = phvi_transform(pred, A, {1.0, 1.0});
  REQUIRE(inst.transformed_points.size() == 1);
  CHECK(inst.transformed_reference[0] == doctest::Approx(1.0));
  CHECK(inst.transformed_reference[1] == doctest::Approx(1.0));
  CHECK(inst.transformed_points[0][0] == doctest::Approx(0.5));
  CHECK(inst.transformed_points[0][1] == doctest::Approx(0.5));
}

TEST_CASE("phvi transform invariant over random instances") {
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    const auto pred = gauss2(rng.uniform(-1.0, 2.0), rng.uniform(0.0, 1.5),
                             rng.uniform(-1.0, 2.0), rng.uniform(0.0, 1.5));
    const ApproximationSet A = random_set_2d(rng, 6);
    const PhviInstance inst = phvi_transform(pred, A, {1.0, 1.0});
    for (const auto& p : inst.transformed_points) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(p[j] >= -1e-12);
        CHECK(p[j] <= inst.transformed_reference[j] + 1e-12);
      }
    }
  }
}

TEST_CASE("ehvi with empty set factorizes") {
  // A empty, normalized maximization with centered unit marginals and
  // reference at the means: product of the two one-sided expectations.
  const auto pred = gauss2(1.0, 1.0, 1.0, 1.0);
  const double v = ehvi_exact(pred, make_set({}), {1.0, 1.0});
  const double phi0 = 0.3989422804014327;
  CHECK(v == doctest::Approx(phi0 * phi0).epsilon(1e-10));
}

TEST_CASE("ehvi zero when the set already covers the reference") {
  const auto pred = gauss2(0.9, 0.01, 0.9, 0.01);
  const double v = ehvi_exact(pred, make_set({{0.0, 0.0}}), {1.0, 1.0});
  CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("ehvi matches the MC oracle on the staircase fixture") {
  IndependentGaussianPrediction pred;
  pred.marginals = {{2.0, 0.7}, {1.5, 0.6}};
  const double exact = ehvi_exact(pred, staircase_set(), staircase_reference());
  const McEstimate mc =
      ehvi_mc_oracle(pred, staircase_set(), staircase_reference(), 1000000, 0);
  CHECK(exact > 0.0);
  CHECK(std::abs(exact - mc.estimate) <= 3.0 * mc.std_error);
}

TEST_CASE("mc oracle basics") {
  // Point-mass prediction reproduces deterministic improvement with zero SE.
  const auto pred = gauss2(2.45, 0.0, 1.05, 0.0);
  const McEstimate mc =
      ehvi_mc_oracle(pred, staircase_set(), staircase_reference(), 2000, 1);
  CHECK(mc.estimate == doctest::Approx(1.6975).epsilon(1e-12));
  CHECK(mc.std_error == 0.0);

  // SE scales like 1/sqrt(n).
  IndependentGaussianPrediction noisy;
  noisy.marginals = {{2.0, 0.7}, {1.5, 0.6}};
  const McEstimate a =
      ehvi_mc_oracle(noisy, staircase_set(), staircase_reference(), 50000, 2);
  const McEstimate b =
      ehvi_mc_oracle(noisy, staircase_set(), staircase_reference(), 200000, 2);
  CHECK(b.std_error == doctest::Approx(a.std_error / 2.0).epsilon(0.15));
}

TEST_CASE("ehvi mean and variance monotonicity") {
  Rng rng(51);
  for (int t = 0; t < 300; ++t) {
    const double m1 = rng.uniform(-0.5, 1.5), m2 = rng.uniform(-0.5, 1.5);
    const double s1 = rng.uniform(0.01, 1.0), s2 = rng.uniform(0.01, 1.0);
    const ApproximationSet A = random_set_2d(rng, 5);
    const Vec r{1.0, 1.0};
    const double base = ehvi_exact(gauss2(m1, s1, m2, s2), A, r);
    // Improving a mean (toward smaller objectives) cannot hurt.
    CHECK(ehvi_exact(gauss2(m1 - rng.uniform(0.0, 0.5), s1, m2, s2), A, r) >=
          base - 1e-10);
    // Inflating a standard deviation cannot hurt.
    CHECK(ehvi_exact(gauss2(m1, s1 + rng.uniform(0.0, 1.0), m2, s2), A, r) >=
          base - 1e-10);
    CHECK(ehvi_exact(gauss2(m1, s1, m2, s2 + rng.uniform(0.0, 1.0)), A, r) >=
          base - 1e-10);
  }
}

TEST_CASE("weighted ehvi") {
  const DesirabilityMap id = DesirabilityMap::identity(2, -100.0, 100.0);
  IndependentGaussianPrediction pred;
  pred.marginals = {{2.0, 0.7}, {1.5, 0.6}};
  CHECK(ehvi_weighted(pred, staircase_set(), staircase_reference(), id) ==
        doctest::Approx(ehvi_exact(pred, staircase_set(), staircase_reference()))
            .epsilon(1e-12));

  // Degenerate prediction at a transformed point: the weighted improvement of
  // its image.
  DesirabilityMap ramp;
  ramp.maps = {{{0.0, 5.0}, {0.0, 2.5}}, {{0.0, 4.0}, {0.0, 4.0}}};
  const auto point = gauss2(1.225, 0.0, 1.05, 0.0);  // image of (2.45, 1.05)
  ApproximationSet tA;
  for (const auto& a : staircase_set().points) tA.points.push_back(ramp.apply(a));
  const double expect = hvi(ramp.apply({2.45, 1.05}), tA, ramp.apply({5.0, 4.0}));
  CHECK(ehvi_weighted(point, staircase_set(), staircase_reference(), ramp) ==
        doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("cone ehvi exact and MC paths") {
  IndependentGaussianPrediction pred;
  pred.marginals = {{2.0, 0.7}, {1.5, 0.6}};

  const ConeEhviResult id_res = ehvi_cone(pred, staircase_set(), staircase_reference(),
                                          SimplicialCone::identity(2));
  CHECK_FALSE(id_res.used_mc);
  CHECK(id_res.value ==
        doctest::Approx(ehvi_exact(pred, staircase_set(), staircase_reference()))
            .epsilon(1e-12));

  // Diagonal cones stay on the exact path.
  const SimplicialCone diag = SimplicialCone::from_generators({{2.0, 0.0}, {0.0, 1.0}});
  const ConeEhviResult diag_res =
      ehvi_cone(pred, staircase_set(), staircase_reference(), diag);
  CHECK_FALSE(diag_res.used_mc);

  // Shear cone falls back to MC; the sigma -> 0 limit matches the
  // deterministic cone improvement of the mean point.
  const SimplicialCone shear = SimplicialCone::from_generators({{1.0, 0.4}, {0.0, 1.0}});
  const auto point = gauss2(2.45, 0.0, 1.05, 0.0);
  const ConeEhviResult shear_res =
      ehvi_cone(point, staircase_set(), staircase_reference(), shear, 50000, 3);
  CHECK(shear_res.used_mc);
  const Vec ly = shear.apply_inverse({2.45, 1.05});
  ApproximationSet lA;
  for (const auto& a : staircase_set().points) lA.points.push_back(shear.apply_inverse(a));
  const double expect =
      shear.abs_determinant * hvi(ly, lA, shear.apply_inverse(staircase_reference()));
  CHECK(shear_res.value == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("truncated ehvi") {
  IndependentGaussianPrediction pred;
  pred.marginals = {{2.0, 0.7}, {1.5, 0.6}};
  const Box wide{{-1e6, -1e6}, {1e6, 1e6}};
  CHECK(tehvi(pred, staircase_set(), staircase_reference(), wide) ==
        doctest::Approx(ehvi_exact(pred, staircase_set(), staircase_reference()))
            .epsilon(1e-8));

  // ROI fully inside the dominated region: no achievable improvement.
  const Box inside{{4.0, 3.0}, {4.5, 3.5}};
  CHECK(tehvi(pred, staircase_set(), staircase_reference(), inside) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("tehvi matches a truncated-sampling oracle") {
  IndependentGaussianPrediction pred;
  pred.marginals = {{0.4, 0.3}, {0.6, 0.25}};
  const ApproximationSet A = make_set({{0.3, 0.7}, {0.6, 0.4}});
  const Vec r{1.0, 1.0};
  const Box roi{{0.0, 0.0}, {1.0, 1.0}};
  const double exact = tehvi(pred, A, r, roi);

  Rng rng(61);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t kept = 0;
  while (kept < 400000) {
    const Vec y{pred.marginals[0].mean + pred.marginals[0].std * rng.normal(),
                pred.marginals[1].mean + pred.marginals[1].std * rng.normal()};
    if (y[0] < roi.lower[0] || y[0] > roi.upper[0] || y[1] < roi.lower[1] ||
        y[1] > roi.upper[1]) {
      continue;
    }
    const double v = hvi(y, A, r);
    sum += v;
    sum_sq += v * v;
    ++kept;
  }
  const double mean = sum / static_cast<double>(kept);
  const double var = sum_sq / static_cast<double>(kept) - mean * mean;
  const double se = std::sqrt(var / static_cast<double>(kept));
  CHECK(std::abs(exact - mean) <= 3.0 * se);
}

TEST_CASE("tehvi variance counterexample search") {
  CounterexampleSearchConfig cfg;
  cfg.seed = 0;
  const TehviVarianceCounterexample rec = find_tehvi_variance_counterexample(cfg);
  REQUIRE(rec.found);
  CHECK(rec.tehvi_lo < rec.tehvi_hi - 10.0 * cfg.tolerance);
  for (std::size_t j = 0; j < rec.sigma.size(); ++j) {
    CHECK(rec.sigma_prime[j] >= rec.sigma[j]);
  }

  // Re-evaluate both sides from the stored record.
  IndependentGaussianPrediction lo_pred, hi_pred;
  lo_pred.marginals = {{rec.mu[0], rec.sigma_prime[0]}, {rec.mu[1], rec.sigma_prime[1]}};
  hi_pred.marginals = {{rec.mu[0], rec.sigma[0]}, {rec.mu[1], rec.sigma[1]}};
  ApproximationSet A;
  A.points = rec.set;
  CHECK(tehvi(lo_pred, A, rec.reference, rec.roi) == doctest::Approx(rec.tehvi_lo));
  CHECK(tehvi(hi_pred, A, rec.reference, rec.roi) == doctest::Approx(rec.tehvi_hi));
}

TEST_CASE("canonical ehvi negative control finds no violations") {
  CounterexampleSearchConfig cfg;
  cfg.seed = 0;
  cfg.budget = 10000;
  CHECK(count_ehvi_variance_violations(cfg) == 0);
}
