#include "pacq/surrogate_gp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pacq {

namespace {

double kernel_eval(const Kernel& k, const Vec& a, const Vec& b) {
  double q = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double u = (a[d] - b[d]) / k.length_scales[d];
    q += u * u;
  }
  return k.signal_variance * std::exp(-0.5 * q);
}

}  // namespace

GPModel GPModel::fit(const std::vector<Vec>& inputs, const std::vector<double>& targets,
                     const Kernel& kernel) {
  if (inputs.empty() || inputs.size() != targets.size()) {
    throw std::invalid_argument("inputs/targets size mismatch");
  }
  const std::size_t dim = inputs.front().size();
  if (kernel.length_scales.size() != dim) {
    throw std::invalid_argument("length scale dimension mismatch");
  }
  for (double l : kernel.length_scales) {
    if (l <= 0.0) throw std::invalid_argument("nonpositive length scale");
  }
  if (kernel.signal_variance <= 0.0) {
    throw std::invalid_argument("nonpositive signal variance");
  }

  GPModel model;
  model.inputs_ = inputs;
  model.kernel_ = kernel;

  const std::size_t n = inputs.size();
  model.target_mean_ =
      std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double t : targets) {
    const double d = t - model.target_mean_;
    var += d * d;
  }
  var /= static_cast<double>(n);
  model.target_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;

  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y(static_cast<Eigen::Index>(i)) = (targets[i] - model.target_mean_) / model.target_scale_;
  }

  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel_eval(kernel, inputs[i], inputs[j]);
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = kernel.jitter;
  bool ok = false;
  while (jitter <= 1e-6 + 1e-18) {
    Eigen::MatrixXd reg = K;
    reg.diagonal().array() += kernel.noise_variance + jitter;
    llt.compute(reg);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
    jitter *= 100.0;
  }
  if (!ok) throw std::runtime_error("kernel matrix not positive definite");

  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::VectorXd alpha = llt.solve(y);

  model.chol_.assign(n, std::vector<double>(n, 0.0));
  model.alpha_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.alpha_[i] = alpha(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j <= i; ++j) {
      model.chol_[i][j] = L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }

  double log_det = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_det += 2.0 * std::log(model.chol_[i][i]);
  const double n_d = static_cast<double>(n);
  model.log_marginal_likelihood_ =
      -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * n_d * std::log(2.0 * M_PI);
  if (!std::isfinite(model.log_marginal_likelihood_)) {
    throw std::runtime_error("non-finite marginal likelihood");
  }
  return model;
}

Gaussian1D GPModel::predict(const Vec& x) const {
  const std::size_t n = inputs_.size();
  std::vector<double> k_star(n);
  for (std::size_t i = 0; i < n; ++i) {
    k_star[i] = kernel_eval(kernel_, inputs_[i], x);
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += k_star[i] * alpha_[i];

  // v = L^-1 k_star by forward substitution.
  std::vector<double> v(k_star);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) v[i] -= chol_[i][j] * v[j];
    v[i] /= chol_[i][i];
  }
  double var = kernel_.signal_variance;
  for (std::size_t i = 0; i < n; ++i) var -= v[i] * v[i];
  if (var < 0.0) var = 0.0;

  Gaussian1D out;
  out.mean = target_mean_ + target_scale_ * mean;
  out.std = target_scale_ * std::sqrt(var);
  return out;
}

Kernel select_hyperparameters(const std::vector<Vec>& inputs,
                              const std::vector<double>& targets,
                              const std::vector<KernelGridPoint>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty hyperparameter grid");
  const std::size_t dim = inputs.empty() ? 0 : inputs.front().size();
  bool any = false;
  double best_ll = 0.0;
  Kernel best;
  for (const auto& g : grid) {
    Kernel k;
    k.signal_variance = g.signal_variance;
    k.length_scales.assign(dim, g.length_scale);
    k.noise_variance = g.noise_variance;
    try {
      const GPModel m = GPModel::fit(inputs, targets, k);
      const double ll = m.log_marginal_likelihood();
      if (!any || ll > best_ll) {
        any = true;
        best_ll = ll;
        best = k;
      }
    } catch (const std::runtime_error&) {
      continue;
    }
  }
  if (!any) throw std::runtime_error("no hyperparameter grid point factorized");
  return best;
}

}  // namespace pacq
