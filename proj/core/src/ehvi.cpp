#include "pacq/ehvi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pacq/rng.hpp"

namespace pacq {

namespace {

void require_dims(const IndependentGaussianPrediction& pred, const ApproximationSet& A,
                  const Vec& r) {
  if (pred.dimension() != r.size()) throw std::invalid_argument("dimension mismatch");
  for (const auto& p : A.points) {
    if (p.size() != r.size()) throw std::invalid_argument("dimension mismatch");
  }
  if (A.orientation != Orientation::minimize) {
    throw std::invalid_argument("EHVI expects minimization-orientation input");
  }
}

// Pareto front of the clipped minimization set, sorted ascending in f1
// (descending in f2). Used by the fast 2-D improvement evaluation.
std::vector<Vec> sorted_front_2d(const ApproximationSet& A, const Vec& r) {
  ApproximationSet work = A;
  for (auto& p : work.points) {
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::min(p[j], r[j]);
  }
  work = pareto_filter(work);
  std::sort(work.points.begin(), work.points.end(),
            [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
  return work.points;
}

// Improvement of sample y over a sorted 2-D front, O(|front|).
double improvement_2d(const Vec& y, const std::vector<Vec>& front, const Vec& r) {
  const double y1 = std::min(y[0], r[0]);
  const double y2 = std::min(y[1], r[1]);
  double area = (r[0] - y1) * (r[1] - y2);
  if (area <= 0.0) return 0.0;
  double upper_f2 = r[1];
  for (const auto& p : front) {
    const double w = r[0] - std::max(p[0], y1);
    if (w > 0.0) {
      const double h = upper_f2 - std::max(p[1], y2);
      if (h > 0.0) area -= w * h;
    }
    upper_f2 = p[1];
  }
  return area > 0.0 ? area : 0.0;
}

}  // namespace

PhviInstance phvi_transform(const IndependentGaussianPrediction& pred,
                            const ApproximationSet& A, const Vec& r) {
  require_dims(pred, A, r);
  const std::size_t m = r.size();

  PhviInstance inst;
  inst.transformed_reference.resize(m);
  std::vector<Gaussian1D> normalized(m);
  for (std::size_t j = 0; j < m; ++j) {
    // Minimization coordinate v maps to maximization value r_j - v.
    normalized[j] = Gaussian1D{r[j] - pred.marginals[j].mean, pred.marginals[j].std};
    inst.transformed_reference[j] = ei_exceed(0.0, normalized[j]);
  }
  for (const auto& a : A.points) {
    Vec ta(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double a_norm = std::max(r[j] - a[j], 0.0);  // clip to the reference box
      ta[j] = inst.transformed_reference[j] - ei_exceed(a_norm, normalized[j]);
      ta[j] = std::clamp(ta[j], 0.0, inst.transformed_reference[j]);
    }
    inst.transformed_points.push_back(std::move(ta));
  }
  return inst;
}

double hvi_max_from_origin(const Vec& upper, const std::vector<Vec>& points) {
  // Maximization boxes [0, p] become minimization boxes [-p, 0].
  ApproximationSet neg;
  for (const auto& p : points) neg.points.push_back(negated(p));
  const Vec origin(upper.size(), 0.0);
  const double base = hypervolume(neg, origin);
  neg.points.push_back(negated(upper));
  const double with = hypervolume(neg, origin);
  return std::max(with - base, 0.0);
}

double ehvi_exact(const IndependentGaussianPrediction& pred, const ApproximationSet& A,
                  const Vec& r) {
  const PhviInstance inst = phvi_transform(pred, pareto_filter(A), r);
  return hvi_max_from_origin(inst.transformed_reference, inst.transformed_points);
}

McEstimate ehvi_mc_oracle(const IndependentGaussianPrediction& pred,
                          const ApproximationSet& A, const Vec& r,
                          std::size_t n_samples, std::uint64_t seed) {
  require_dims(pred, A, r);
  if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
  const std::size_t m = r.size();
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;

  if (m == 2) {
    const auto front = sorted_front_2d(A, r);
    Vec y(2);
    for (std::size_t i = 0; i < n_samples; ++i) {
      y[0] = rng.normal(pred.marginals[0].mean, pred.marginals[0].std);
      y[1] = rng.normal(pred.marginals[1].mean, pred.marginals[1].std);
      const double v = improvement_2d(y, front, r);
      sum += v;
      sum_sq += v * v;
    }
  } else {
    Vec y(m);
    for (std::size_t i = 0; i < n_samples; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        y[j] = rng.normal(pred.marginals[j].mean, pred.marginals[j].std);
      }
      const double v = hvi(y, A, r);
      sum += v;
      sum_sq += v * v;
    }
  }
  McEstimate est;
  const double n = static_cast<double>(n_samples);
  est.estimate = sum / n;
  const double var = std::max(sum_sq / n - est.estimate * est.estimate, 0.0);
  est.std_error = std::sqrt(var / n);
  return est;
}

double ehvi_weighted(const IndependentGaussianPrediction& pred_transformed,
                     const ApproximationSet& A, const Vec& r,
                     const DesirabilityMap& d) {
  ApproximationSet transformed;
  transformed.orientation = A.orientation;
  for (const auto& p : A.points) {
    Vec q = p;
    for (std::size_t j = 0; j < q.size(); ++j) q[j] = std::min(q[j], r[j]);
    transformed.points.push_back(d.apply(q));
  }
  return ehvi_exact(pred_transformed, transformed, d.apply(r));
}

ConeEhviResult ehvi_cone(const IndependentGaussianPrediction& pred,
                         const ApproximationSet& A, const Vec& r,
                         const SimplicialCone& cone, std::size_t mc_samples,
                         std::uint64_t seed) {
  require_dims(pred, A, r);
  ConeEhviResult res;
  ApproximationSet transformed;
  for (const auto& p : A.points) transformed.points.push_back(cone.apply_inverse(p));
  const Vec lr = cone.apply_inverse(r);

  if (cone.inverse_is_scaled_permutation()) {
    const std::size_t m = r.size();
    std::vector<Gaussian1D> marg(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (std::abs(cone.inverse[i][j]) > 1e-12) {
          marg[i] = Gaussian1D{cone.inverse[i][j] * pred.marginals[j].mean,
                               cone.inverse[i][j] * pred.marginals[j].std};
        }
      }
    }
    res.value = cone.abs_determinant *
                ehvi_exact(IndependentGaussianPrediction{marg}, transformed, lr);
    return res;
  }

  res.used_mc = true;
  const std::size_t m = r.size();
  Rng rng(seed);
  const auto front = (m == 2) ? sorted_front_2d(transformed, lr) : std::vector<Vec>{};
  double sum = 0.0;
  double sum_sq = 0.0;
  Vec y(m);
  for (std::size_t i = 0; i < mc_samples; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      y[j] = rng.normal(pred.marginals[j].mean, pred.marginals[j].std);
    }
    const Vec ly = cone.apply_inverse(y);
    const double v =
        (m == 2) ? improvement_2d(ly, front, lr) : hvi(ly, transformed, lr);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(mc_samples);
  res.value = cone.abs_determinant * sum / n;
  const double var = std::max(sum_sq / n - (sum / n) * (sum / n), 0.0);
  res.std_error = cone.abs_determinant * std::sqrt(var / n);
  return res;
}

double tehvi(const IndependentGaussianPrediction& pred, const ApproximationSet& A,
             const Vec& r, const Box& roi) {
  require_dims(pred, A, r);
  const std::size_t m = r.size();

  PhviInstance inst;
  inst.transformed_reference.resize(m);
  std::vector<TruncatedGaussian1D> tg(m);
  for (std::size_t j = 0; j < m; ++j) {
    // In maximization-from-zero coordinates the ROI [a_j, b_j] becomes
    // [r_j - b_j, r_j - a_j].
    tg[j] = TruncatedGaussian1D{
        Gaussian1D{r[j] - pred.marginals[j].mean, pred.marginals[j].std},
        r[j] - roi.upper[j], r[j] - roi.lower[j]};
    inst.transformed_reference[j] = truncated_ei_exceed(0.0, tg[j]);
  }
  const ApproximationSet filtered = pareto_filter(A);
  for (const auto& a : filtered.points) {
    Vec ta(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double a_norm = std::max(r[j] - a[j], 0.0);
      ta[j] = inst.transformed_reference[j] - truncated_ei_exceed(a_norm, tg[j]);
      ta[j] = std::clamp(ta[j], 0.0, inst.transformed_reference[j]);
    }
    inst.transformed_points.push_back(std::move(ta));
  }
  return hvi_max_from_origin(inst.transformed_reference, inst.transformed_points);
}

namespace {

struct SearchInstance {
  IndependentGaussianPrediction pred;
  Vec sigma_prime;
  ApproximationSet set;
  Vec reference;
  Box roi;
};

SearchInstance draw_search_instance(Rng& rng) {
  SearchInstance s;
  s.reference = {1.0, 1.0};
  s.roi = Box{{0.0, 0.0}, {1.0, 1.0}};
  s.set.points = {{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)}};
  const double mu1 = rng.uniform(-0.5, 1.5);
  const double mu2 = rng.uniform(-0.5, 1.5);
  const double s1 = rng.uniform(0.02, 0.6);
  const double s2 = rng.uniform(0.02, 0.6);
  s.pred.marginals = {Gaussian1D{mu1, s1}, Gaussian1D{mu2, s2}};
  s.sigma_prime = {s1, s2};
  s.sigma_prime[rng.index(2)] *= rng.uniform(2.0, 20.0);
  return s;
}

}  // namespace

TehviVarianceCounterexample find_tehvi_variance_counterexample(
    const CounterexampleSearchConfig& cfg) {
  TehviVarianceCounterexample out;
  out.seed = cfg.seed;
  Rng rng(cfg.seed);
  for (std::size_t trial = 0; trial < cfg.budget; ++trial) {
    const SearchInstance s = draw_search_instance(rng);
    double lo_value = 0.0, hi_value = 0.0;
    try {
      hi_value = tehvi(s.pred, s.set, s.reference, s.roi);
      IndependentGaussianPrediction wide = s.pred;
      for (std::size_t j = 0; j < 2; ++j) wide.marginals[j].std = s.sigma_prime[j];
      lo_value = tehvi(wide, s.set, s.reference, s.roi);
    } catch (const std::domain_error&) {
      continue;  // truncation mass underflow; not a usable instance
    }
    if (lo_value < hi_value - 10.0 * cfg.tolerance) {
      out.found = true;
      out.trials_used = trial + 1;
      out.mu = {s.pred.marginals[0].mean, s.pred.marginals[1].mean};
      out.sigma = {s.pred.marginals[0].std, s.pred.marginals[1].std};
      out.sigma_prime = s.sigma_prime;
      out.set = s.set.points;
      out.reference = s.reference;
      out.roi = s.roi;
      out.tehvi_hi = hi_value;
      out.tehvi_lo = lo_value;
      return out;
    }
  }
  out.trials_used = cfg.budget;
  return out;
}

std::size_t count_ehvi_variance_violations(const CounterexampleSearchConfig& cfg) {
  Rng rng(cfg.seed);
  std::size_t violations = 0;
  for (std::size_t trial = 0; trial < cfg.budget; ++trial) {
    const SearchInstance s = draw_search_instance(rng);
    const double hi = ehvi_exact(s.pred, s.set, s.reference);
    IndependentGaussianPrediction wide = s.pred;
    for (std::size_t j = 0; j < 2; ++j) wide.marginals[j].std = s.sigma_prime[j];
    const double lo = ehvi_exact(wide, s.set, s.reference);
    if (lo < hi - 10.0 * cfg.tolerance) ++violations;
  }
  return violations;
}

}  // namespace pacq
