#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pacq/quadrature.hpp"
#include "pacq/r2_indicator.hpp"
#include "support.hpp"

using namespace pacq;
using namespace pacq::test;

namespace {

TchebycheffParams unit_params() {
  TchebycheffParams p;
  p.utopian = {0.0, 0.0};
  p.reference = {1.0, 1.0};
  return p;
}

ApproximationSet dense_front(std::size_t n) {
  ApproximationSet A;
  A.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    A.points.push_back({x * x, (1.0 - x) * (1.0 - x)});
  }
  return A;
}

}  // namespace

TEST_CASE("tchebycheff scalarization values") {
  const TchebycheffParams p = unit_params();
  CHECK(tcheby_value({0.25, 0.25}, {0.5, 0.5}, p) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(tcheby_value({4.0 / 9.0, 1.0 / 9.0}, {0.2, 0.8}, p) ==
        doctest::Approx(0.0888888889).epsilon(1e-9));
  CHECK(tcheby_value({0.0, 0.0}, {0.3, 0.7}, p) == 0.0);
  // Boundary weights are finite and continuous.
  CHECK(tcheby_value({0.4, 0.9}, {1.0, 0.0}, p) == doctest::Approx(0.4));
  CHECK(tcheby_value({0.4, 0.9}, {0.0, 1.0}, p) == doctest::Approx(0.9));
}

TEST_CASE("envelope values") {
  const TchebycheffParams p = unit_params();
  CHECK(envelope_value(make_set({{0.0, 1.0}}), {0.25, 0.75}, p) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK(envelope_value(make_set({{1.0, 1.0}}), {0.3, 0.7}, p) ==
        doctest::Approx(reference_envelope_value({0.3, 0.7}, p)));
  CHECK(envelope_value(dense_front(10000), {0.5, 0.5}, p) ==
        doctest::Approx(0.125).epsilon(1e-4));
  CHECK_THROWS_AS(envelope_value(make_set({}), {0.5, 0.5}, p), std::invalid_argument);

  std::size_t witness = 99;
  envelope_value(make_set({{0.5, 0.5}, {0.5, 0.5}}), {0.5, 0.5}, p, &witness);
  CHECK(witness == 0);  // ties resolve to the lowest index
}

TEST_CASE("piecewise envelope: single point") {
  const TchebycheffParams p = unit_params();
  const PiecewiseLinearEnvelope env = envelope_piecewise_2d(make_set({{0.0, 1.0}}), p);
  // h(lambda) = max{0, 1 - lambda} = 1 - lambda on [0, 1].
  for (double l : {0.0, 0.25, 0.5, 0.99, 1.0}) {
    CHECK(env.value(l) == doctest::Approx(1.0 - l).epsilon(1e-13));
  }
}

TEST_CASE("piecewise envelope: diagonal scaling") {
  const TchebycheffParams p = unit_params();
  const double c = 0.37;
  const PiecewiseLinearEnvelope env = envelope_piecewise_2d(make_set({{c, c}}), p);
  for (double l = 0.0; l <= 1.0; l += 0.01) {
    CHECK(env.value(l) == doctest::Approx(c * std::max(l, 1.0 - l)).epsilon(1e-13));
  }
}

TEST_CASE("piecewise envelope matches pointwise min on grids") {
  const TchebycheffParams p = unit_params();
  const ApproximationSet fig8 =
      make_set({{0.12, 0.88}, {0.30, 0.55}, {0.55, 0.32}, {0.84, 0.16}});
  const PiecewiseLinearEnvelope env = envelope_piecewise_2d(fig8, p);
  for (std::size_t i = 0; i <= 10000; ++i) {
    const double l = static_cast<double>(i) / 10000.0;
    CHECK(env.value(l) ==
          doctest::Approx(envelope_value(fig8, {l, 1.0 - l}, p)).epsilon(1e-12));
  }

  Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    ApproximationSet A;
    const std::size_t n = 1 + rng.index(50);
    for (std::size_t i = 0; i < n; ++i) {
      A.points.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
    }
    const PiecewiseLinearEnvelope e = envelope_piecewise_2d(A, p);
    for (int i = 0; i <= 500; ++i) {
      const double l = i / 500.0;
      const double direct = envelope_value(A, {l, 1.0 - l}, p);
      CHECK(std::abs(e.value(l) - direct) < 1e-12);
    }
  }
}

TEST_CASE("discrete r2") {
  const TchebycheffParams p = unit_params();
  const std::vector<Vec> three = {{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}};
  CHECK(discrete_r2(make_set({{0.0, 1.0}}), three, p) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(discrete_r2(make_set({{0.0, 0.0}}), three, p) == 0.0);
  CHECK(discrete_r2(make_set({{0.3, 0.4}}), {{0.5, 0.5}}, p) ==
        doctest::Approx(envelope_value(make_set({{0.3, 0.4}}), {0.5, 0.5}, p)));
  CHECK_THROWS_AS(discrete_r2(make_set({{0.0, 0.0}}), {}, p), std::invalid_argument);
}

TEST_CASE("discrete r2 improvement") {
  const TchebycheffParams p = unit_params();
  CHECK(discrete_r2_improvement(make_set({{1.0, 1.0}}), {{0.5, 0.5}, {0.2, 0.8}}, p) ==
        0.0);
  CHECK(discrete_r2_improvement(make_set({{0.0, 1.0}}), {{0.75, 0.25}}, p) ==
        doctest::Approx(0.5).epsilon(1e-14));

  // Dense uniform weights converge to the exact 1/4.
  std::vector<Vec> dense;
  const std::size_t K = 10000;
  for (std::size_t k = 0; k < K; ++k) {
    const double l = (static_cast<double>(k) + 0.5) / static_cast<double>(K);
    dense.push_back({l, 1.0 - l});
  }
  CHECK(discrete_r2_improvement(make_set({{0.0, 1.0}}), dense, p) ==
        doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("exact 2d r2 integrals") {
  const TchebycheffParams p = unit_params();
  const WeightDensity rho = uniform_weight_density();

  CHECK(r2_value_exact_2d(make_set({{1.0, 1.0}}), p, rho) ==
        doctest::Approx(0.75).epsilon(1e-13));
  CHECK(r2_value_exact_2d(make_set({{0.0, 0.0}}), p, rho) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(r2_value_exact_2d(dense_front(10000), p, rho) ==
        doctest::Approx(0.08904862).epsilon(6e-4));
}

TEST_CASE("exact 2d r2 improvement values") {
  const TchebycheffParams p = unit_params();
  const WeightDensity rho = uniform_weight_density();

  CHECK(r2_improvement_exact_2d(make_set({{0.0, 1.0}}), p, rho) ==
        doctest::Approx(0.25).epsilon(1e-10));
  const double s = 3.0 - std::sqrt(6.0);
  CHECK(r2_improvement_exact_2d(make_set({{s, s}}), p, rho) ==
        doctest::Approx(0.75 * (std::sqrt(6.0) - 2.0)).epsilon(1e-10));
  CHECK(r2_improvement_exact_2d(make_set({{1.0, 0.5}}), p, rho) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("scaling identity for diagonal singletons") {
  const TchebycheffParams p = unit_params();
  const WeightDensity rho = uniform_weight_density();
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    CHECK(r2_improvement_exact_2d(make_set({{s, s}}), p, rho) ==
          doctest::Approx((1.0 - s) * 0.75).epsilon(1e-12));
  }
}

TEST_CASE("quadrature improvement converges to the exact value") {
  const TchebycheffParams p = unit_params();
  const WeightDensity rho = uniform_weight_density();
  const ApproximationSet A = make_set({{0.0, 1.0}});

  const double q64 = r2_improvement_quadrature(A, p, rho, simplex_rule_gauss_2d(64));
  const double q128 = r2_improvement_quadrature(A, p, rho, simplex_rule_gauss_2d(128));
  CHECK(std::abs(q64 - 0.25) < 1e-4);
  CHECK(std::abs(q128 - 0.25) < std::abs(q64 - 0.25));

  // m = 3: utopian-only set gets the full reference-envelope mass.
  TchebycheffParams p3;
  p3.utopian = {0.0, 0.0, 0.0};
  p3.reference = {1.0, 1.0, 1.0};
  const SimplexQuadratureRule rule3 = simplex_rule_centroid_3d(40);
  const double full =
      r2_improvement_quadrature(make_set({{0.0, 0.0, 0.0}}), p3, rho, rule3);
  double href_mass = 0.0;
  for (std::size_t l = 0; l < rule3.size(); ++l) {
    href_mass += rule3.weights[l] * reference_envelope_value(rule3.nodes[l], p3);
  }
  CHECK(full == doctest::Approx(href_mass).epsilon(1e-12));
  CHECK(r2_improvement_quadrature(make_set({{1.0, 1.0, 1.0}}), p3, rho, rule3) == 0.0);

  // 2^10 Gauss nodes vs exact on random sets. The integrand has kinks at the
  // envelope breakpoints, so a global Gauss rule converges only at O(n^-2);
  // observed errors at 1024 nodes sit around 3e-7.
  Rng rng(81);
  const SimplexQuadratureRule rule1024 = simplex_rule_gauss_2d(1024);
  for (int t = 0; t < 10; ++t) {
    const ApproximationSet B = random_set_2d(rng, 10);
    CHECK(std::abs(r2_improvement_quadrature(B, p, rho, rule1024) -
                   r2_improvement_exact_2d(B, p, rho)) < 1e-6);
  }
}

TEST_CASE("shadow intervals") {
  const TchebycheffParams p = unit_params();
  const ShadowInterval sh = shadow_interval(make_set({{0.0, 1.0}}), {0.75, 0.25}, p);
  REQUIRE_FALSE(sh.empty);
  CHECK(sh.lo == doctest::Approx(0.25));
  CHECK(sh.hi == doctest::Approx(0.75));
  CHECK(sh.length() == doctest::Approx(0.5));

  const ShadowInterval deg = shadow_interval(make_set({{1.0, 1.0}}), {0.4, 0.6}, p);
  CHECK(deg.length() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  // Points beyond the reference produce empty shadows at some weights.
  const ShadowInterval em = shadow_interval(make_set({{1.5, 1.6}}), {0.5, 0.5}, p);
  CHECK(em.empty);
  CHECK(em.length() == 0.0);
}

TEST_CASE("tsm equals the exact r2 improvement") {
  const TchebycheffParams p = unit_params();
  const WeightDensity rho = uniform_weight_density();

  CHECK(tsm(make_set({{0.0, 1.0}}), p, rho, TsmMethod::exact_2d) ==
        doctest::Approx(0.25).epsilon(1e-10));

  const ApproximationSet fig8 =
      make_set({{0.12, 0.88}, {0.30, 0.55}, {0.55, 0.32}, {0.84, 0.16}});
  CHECK(tsm(fig8, p, rho, TsmMethod::exact_2d) ==
        doctest::Approx(r2_improvement_exact_2d(fig8, p, rho)).epsilon(1e-12));

  Rng rng(91);
  for (int t = 0; t < 100; ++t) {
    const ApproximationSet A = random_set_2d(rng, 12);
    const double a = tsm(A, p, rho, TsmMethod::exact_2d);
    const double b = r2_improvement_exact_2d(A, p, rho);
    CHECK(std::abs(a - b) < 1e-10);
  }

  // Quadrature route shares the nodes with the quadrature improvement.
  const SimplexQuadratureRule rule = simplex_rule_gauss_2d(64);
  const ApproximationSet A = make_set({{0.3, 0.6}, {0.7, 0.2}});
  CHECK(tsm(A, p, rho, TsmMethod::quadrature, &rule) ==
        doctest::Approx(r2_improvement_quadrature(A, p, rho, rule)).epsilon(1e-14));
}

TEST_CASE("tsm is monotone under point removal") {
  const TchebycheffParams p = unit_params();
  const WeightDensity rho = uniform_weight_density();
  Rng rng(101);
  for (int t = 0; t < 50; ++t) {
    ApproximationSet A = random_set_2d(rng, 8);
    if (A.size() < 2) continue;
    ApproximationSet B = A;
    B.points.pop_back();
    CHECK(tsm(B, p, rho, TsmMethod::exact_2d) <=
          tsm(A, p, rho, TsmMethod::exact_2d) + 1e-12);
  }
}

TEST_CASE("verification records") {
  const NoWhvRecord no_whv = verify_no_whv_example(0.5);
  CHECK(no_whv.hv_contribution == 0.0);
  CHECK(no_whv.r2_improvement == doctest::Approx(1.0 / 6.0).epsilon(1e-10));

  // The improvement shrinks monotonically to zero as c -> 1.
  double prev = 1.0;
  for (double c : {0.5, 0.7, 0.9, 0.99}) {
    const double v = verify_no_whv_example(c).r2_improvement;
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(verify_no_whv_example(1.5), std::invalid_argument);

  const MagnitudeRecord mag = verify_magnitude_example();
  CHECK(mag.mag_a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mag.mag_b == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mag.i_a == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(mag.i_b == doctest::Approx(0.75 * (std::sqrt(6.0) - 2.0)).epsilon(1e-10));
  CHECK(std::abs(mag.i_a - mag.i_b) > 0.08);
}
