#ifndef PACQ_SURROGATE_GP_HPP
#define PACQ_SURROGATE_GP_HPP

#include <memory>
#include <vector>

#include "pacq/gaussian.hpp"
#include "pacq/pareto_geometry.hpp"

namespace pacq {

/// Squared-exponential kernel with ARD length scales.
struct Kernel {
  double signal_variance = 1.0;
  std::vector<double> length_scales;  // one per design dimension
  double noise_variance = 0.0;
  double jitter = 1e-10;
};

/// Scalar GP regressor with zero prior mean on standardized targets.
class GPModel {
 public:
  /// Throws std::runtime_error if the kernel matrix stays indefinite after
  /// jitter escalation up to 1e-6.
  static GPModel fit(const std::vector<Vec>& inputs, const std::vector<double>& targets,
                     const Kernel& kernel);

  Gaussian1D predict(const Vec& x) const;
  double log_marginal_likelihood() const { return log_marginal_likelihood_; }
  const Kernel& kernel() const { return kernel_; }
  std::size_t size() const { return inputs_.size(); }

 private:
  GPModel() = default;

  std::vector<Vec> inputs_;
  Kernel kernel_;
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
  std::vector<double> alpha_;            // K^-1 y (standardized)
  std::vector<std::vector<double>> chol_;  // lower Cholesky factor
  double log_marginal_likelihood_ = 0.0;
};

struct KernelGridPoint {
  double signal_variance;
  double length_scale;  // shared across dimensions
  double noise_variance;
};

/// Grid search by log marginal likelihood; ties keep the earlier grid entry.
/// Throws std::runtime_error if every grid point fails to factorize.
Kernel select_hyperparameters(const std::vector<Vec>& inputs,
                              const std::vector<double>& targets,
                              const std::vector<KernelGridPoint>& grid);

}  // namespace pacq

#endif
