#ifndef PACQ_TESTS_SUPPORT_HPP
#define PACQ_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "pacq/pareto_geometry.hpp"
#include "pacq/rng.hpp"

namespace pacq::test {

inline ApproximationSet make_set(std::vector<Vec> pts) {
  ApproximationSet A;
  A.points = std::move(pts);
  return A;
}

// The three-point staircase used throughout as the standard 2-D fixture.
inline ApproximationSet staircase_set() {
  return make_set({{1.0, 3.5}, {2.0, 2.5}, {3.0, 1.5}});
}
inline Vec staircase_reference() { return {5.0, 4.0}; }

// Membership-sampling estimate of the dominated-region volume inside the
// origin-to-reference box. Returns (estimate, standard error).
struct McVolume {
  double estimate;
  double std_error;
};

inline McVolume mc_dominated_volume(const ApproximationSet& A, const Vec& lo,
                                    const Vec& r, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t m = r.size();
  double box = 1.0;
  for (std::size_t j = 0; j < m; ++j) box *= r[j] - lo[j];
  std::size_t hits = 0;
  Vec y(m);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < m; ++j) y[j] = rng.uniform(lo[j], r[j]);
    for (const auto& a : A.points) {
      bool dom = true;
      for (std::size_t j = 0; j < m; ++j) {
        if (y[j] < a[j]) {
          dom = false;
          break;
        }
      }
      if (dom) {
        ++hits;
        break;
      }
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  McVolume out;
  out.estimate = box * p;
  out.std_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return out;
}

// Random nondominated-ish 2-D set inside [0, 1]^2 (not filtered).
inline ApproximationSet random_set_2d(Rng& rng, std::size_t max_points) {
  ApproximationSet A;
  const std::size_t n = 1 + rng.index(max_points);
  for (std::size_t i = 0; i < n; ++i) {
    A.points.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
  }
  return A;
}

}  // namespace pacq::test

#endif
