#ifndef PACQ_EHVI_HPP
#define PACQ_EHVI_HPP

#include <cstdint>
#include <vector>

#include "pacq/gaussian.hpp"
#include "pacq/pareto_geometry.hpp"

namespace pacq {

/// Independent per-coordinate Gaussian predictive marginals.
struct IndependentGaussianPrediction {
  std::vector<Gaussian1D> marginals;

  std::size_t dimension() const { return marginals.size(); }
};

/// EHVI rewritten as a deterministic hypervolume-improvement instance in the
/// normalized maximization-from-zero coordinates. The invariant
/// 0 <= transformed point <= transformed_reference holds coordinate-wise.
struct PhviInstance {
  Vec transformed_reference;
  std::vector<Vec> transformed_points;
};

/// Coordinate-wise expected-improvement transform of a minimization
/// instance (A, r, pred). Points are clipped to the reference box first.
PhviInstance phvi_transform(const IndependentGaussianPrediction& pred,
                            const ApproximationSet& A, const Vec& r);

/// HVI of adding `upper` to the set of maximization boxes [0, p]. Used for
/// the transformed instance; exposed for tests.
double hvi_max_from_origin(const Vec& upper, const std::vector<Vec>& points);

/// Exact EHVI via the transformed hypervolume improvement.
double ehvi_exact(const IndependentGaussianPrediction& pred, const ApproximationSet& A,
                  const Vec& r);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo reference: sample Y ~ pred, average hvi(Y, A, r).
McEstimate ehvi_mc_oracle(const IndependentGaussianPrediction& pred,
                          const ApproximationSet& A, const Vec& r,
                          std::size_t n_samples, std::uint64_t seed);

/// Expected weighted-hypervolume improvement for a Gaussian model posed in
/// desirability coordinates: exact EHVI of the transformed instance.
double ehvi_weighted(const IndependentGaussianPrediction& pred_transformed,
                     const ApproximationSet& A, const Vec& r, const DesirabilityMap& d);

struct ConeEhviResult {
  double value = 0.0;
  bool used_mc = false;  // exact path requires L to preserve independence
  double std_error = 0.0;
};

ConeEhviResult ehvi_cone(const IndependentGaussianPrediction& pred,
                         const ApproximationSet& A, const Vec& r,
                         const SimplicialCone& cone, std::size_t mc_samples = 200000,
                         std::uint64_t seed = 0);

/// Truncated EHVI: PHVI with truncated partial-moment transforms per
/// coordinate, conditioning the prediction on the region-of-interest box.
double tehvi(const IndependentGaussianPrediction& pred, const ApproximationSet& A,
             const Vec& r, const Box& roi);

struct CounterexampleSearchConfig {
  std::uint64_t seed = 0;
  std::size_t budget = 100000;
  double tolerance = 1e-9;
};

/// Instance with tehvi(sigma') < tehvi(sigma) - 10 * tolerance, sigma' > sigma.
struct TehviVarianceCounterexample {
  bool found = false;
  std::size_t trials_used = 0;
  Vec mu;
  Vec sigma;
  Vec sigma_prime;
  std::vector<Vec> set;
  Vec reference;
  Box roi;
  double tehvi_hi = 0.0;  // value at sigma
  double tehvi_lo = 0.0;  // value at sigma_prime
  std::uint64_t seed = 0;
};

TehviVarianceCounterexample find_tehvi_variance_counterexample(
    const CounterexampleSearchConfig& cfg);

/// Negative control: the same search against canonical EHVI. Returns the
/// number of violations observed (expected 0).
std::size_t count_ehvi_variance_violations(const CounterexampleSearchConfig& cfg);

}  // namespace pacq

#endif
