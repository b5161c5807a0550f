#include "pacq/er2i.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pacq/rng.hpp"

namespace pacq {

double delta_improvement(const Vec& y, const ApproximationSet& A, const Vec& w,
                         const TchebycheffParams& p) {
  if (A.empty()) throw std::invalid_argument("delta_improvement needs a nonempty set");
  const double h = envelope_value(A, w, p);
  const double g = tcheby_value(y, w, p);
  return g < h ? h - g : 0.0;
}

double er2i_discrete(const std::vector<Gaussian1D>& preds,
                     const std::vector<double>& incumbents) {
  if (preds.size() != incumbents.size() || preds.empty()) {
    throw std::invalid_argument("prediction/incumbent length mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    sum += ei_shortfall(incumbents[k], preds[k]);
  }
  return sum / static_cast<double>(preds.size());
}

double er2i_quadrature(const AchievementSurrogateView& surr, const EnvelopeFn& h_A,
                       const WeightDensity& rho, const SimplexQuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t l = 0; l < rule.size(); ++l) {
    const Vec& lambda = rule.nodes[l];
    const Gaussian1D g{surr.mean_at(lambda), surr.std_at(lambda)};
    total += rule.weights[l] * ei_shortfall(h_A(lambda), g) * rho(lambda);
  }
  return total;
}

double er2i_quadrature(const AchievementSurrogateView& surr,
                       const PiecewiseLinearEnvelope& env, const WeightDensity& rho,
                       const SimplexQuadratureRule& rule) {
  return er2i_quadrature(
      surr, [&env](const Vec& lambda) { return env.value(lambda[0]); }, rho, rule);
}

double objective_gaussian_integrand(const IndependentGaussianPrediction& pred,
                                    const ApproximationSet& A, const Vec& w,
                                    const TchebycheffParams& p) {
  const std::size_t m = pred.dimension();
  if (w.size() != m || p.utopian.size() != m) {
    throw std::invalid_argument("dimension mismatch");
  }
  for (double l : w) {
    if (l <= 0.0) throw std::invalid_argument("boundary weight rejected");
  }
  for (const auto& g : pred.marginals) {
    if (g.std <= 0.0) throw std::invalid_argument("degenerate objective marginal");
  }
  const double sgn = p.orientation == Orientation::minimize ? 1.0 : -1.0;
  const double h = envelope_value(A, w, p);

  // g_lambda(Y) <= t iff every scaled coordinate clears t, so the CDF of the
  // scalarized value is a product of normal CDFs.
  auto product_cdf = [&](double t) {
    double prod = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double mu = sgn * pred.marginals[i].mean - sgn * p.utopian[i];
      const double u = (t / w[i] - mu) / pred.marginals[i].std;
      prod *= std_normal_cdf(u);
      if (prod == 0.0) break;
    }
    return prod;
  };

  double lo = std::numeric_limits<double>::infinity();
  double spread = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double mu = sgn * pred.marginals[i].mean - sgn * p.utopian[i];
    lo = std::min(lo, w[i] * mu);
    spread = std::max(spread, w[i] * pred.marginals[i].std);
  }
  lo -= 10.0 * spread;
  if (h <= lo) return 0.0;
  return std::max(0.0, adaptive_simpson(product_cdf, lo, h, 1e-9));
}

McEstimate er2i_mc_oracle(const IndependentGaussianPrediction& pred,
                          const ApproximationSet& A, const TchebycheffParams& p,
                          const WeightDensity& rho, const SimplexQuadratureRule& rule,
                          std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
  const std::size_t m = pred.dimension();
  Rng rng(seed);
  // Welford update; the naive sum-of-squares form leaves cancellation noise
  // in the degenerate zero-variance case.
  double mean = 0.0;
  double m2 = 0.0;
  Vec y(m);
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = pred.marginals[i].mean + pred.marginals[i].std * rng.normal();
    }
    double v = 0.0;
    for (std::size_t l = 0; l < rule.size(); ++l) {
      v += rule.weights[l] * delta_improvement(y, A, rule.nodes[l], p) *
           rho(rule.nodes[l]);
    }
    const double d = v - mean;
    mean += d / static_cast<double>(s + 1);
    m2 += d * (v - mean);
  }
  McEstimate out;
  const double n = static_cast<double>(n_samples);
  out.estimate = mean;
  out.std_error = std::sqrt(std::max(0.0, m2 / n) / n);
  return out;
}

Er2iVarianceCounterexample find_er2i_variance_counterexample(
    const CounterexampleSearchConfig& cfg) {
  Er2iVarianceCounterexample best;
  best.seed = cfg.seed;
  Rng rng(cfg.seed);
  for (std::size_t trial = 0; trial < cfg.budget; ++trial) {
    Er2iVarianceCounterexample cand;
    cand.seed = cfg.seed;
    cand.params.utopian = {0.0, 0.0};
    cand.params.reference = {10.0, 10.0};
    const double l1 = rng.uniform(0.2, 0.8);
    cand.lambda = {l1, 1.0 - l1};
    cand.mu = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    cand.sigma = {rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5)};
    cand.sigma_prime = cand.sigma;
    const std::size_t which = rng.index(2);
    cand.sigma_prime[which] = cand.sigma[which] * rng.uniform(2.0, 10.0);
    // Regime: incumbent threshold well above both scaled means, where the
    // positive-derivative region carries almost no mass.
    const double a = rng.uniform(2.0, 6.0);
    cand.set.points = {{a, a}};

    IndependentGaussianPrediction base;
    base.marginals = {{cand.mu[0], cand.sigma[0]}, {cand.mu[1], cand.sigma[1]}};
    IndependentGaussianPrediction inflated;
    inflated.marginals = {{cand.mu[0], cand.sigma_prime[0]},
                          {cand.mu[1], cand.sigma_prime[1]}};
    cand.value_hi =
        objective_gaussian_integrand(base, cand.set, cand.lambda, cand.params);
    cand.value_lo =
        objective_gaussian_integrand(inflated, cand.set, cand.lambda, cand.params);
    if (cand.value_lo < cand.value_hi - 10.0 * cfg.tolerance) {
      cand.found = true;
      cand.trials_used = trial + 1;
      return cand;
    }
  }
  best.trials_used = cfg.budget;
  return best;
}

std::size_t count_er2i_discrete_variance_violations(
    const CounterexampleSearchConfig& cfg) {
  Rng rng(cfg.seed);
  std::size_t violations = 0;
  for (std::size_t trial = 0; trial < cfg.budget; ++trial) {
    const std::size_t k = 1 + rng.index(8);
    std::vector<Gaussian1D> preds(k);
    std::vector<double> h(k);
    for (std::size_t i = 0; i < k; ++i) {
      preds[i] = {rng.uniform(-2.0, 2.0), rng.uniform(0.0, 1.5)};
      h[i] = rng.uniform(-2.0, 2.0);
    }
    const double base = er2i_discrete(preds, h);
    auto bumped = preds;
    const std::size_t which = rng.index(k);
    bumped[which].std += rng.uniform(0.01, 2.0);
    const double raised = er2i_discrete(bumped, h);
    if (raised < base - cfg.tolerance) ++violations;
  }
  return violations;
}

}  // namespace pacq
