#include "pacq/bo_driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pacq/ehvi.hpp"
#include "pacq/rng.hpp"

namespace pacq {

namespace {

void validate_config(const Problem& problem, const RunConfig& cfg) {
  if (cfg.n_initial < 1) throw std::invalid_argument("n_initial must be >= 1");
  if (cfg.budget < cfg.n_initial) {
    throw std::invalid_argument("budget must be >= n_initial");
  }
  if (problem.design_box.lower.empty() ||
      problem.design_box.lower.size() != problem.design_box.upper.size()) {
    throw std::invalid_argument("degenerate design box");
  }
  for (std::size_t d = 0; d < problem.design_box.lower.size(); ++d) {
    if (!(problem.design_box.upper[d] > problem.design_box.lower[d])) {
      throw std::invalid_argument("degenerate design box");
    }
  }
  if (cfg.utopian.size() != problem.num_objectives ||
      cfg.reference.size() != problem.num_objectives) {
    throw std::invalid_argument("objective dimension mismatch in config");
  }
}

std::vector<Vec> initial_design(const Problem& problem, const RunConfig& cfg) {
  Rng rng(cfg.seed);
  const std::size_t dim = problem.design_box.lower.size();
  std::vector<Vec> unit = latin_hypercube(rng, cfg.n_initial, dim);
  for (auto& x : unit) {
    for (std::size_t d = 0; d < dim; ++d) {
      x[d] = problem.design_box.lower[d] +
             x[d] * (problem.design_box.upper[d] - problem.design_box.lower[d]);
    }
  }
  return unit;
}

std::vector<KernelGridPoint> default_grid() {
  std::vector<KernelGridPoint> grid;
  for (double ls : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    for (double sv : {0.5, 1.0, 2.0}) {
      grid.push_back({sv, ls, 1e-8});
    }
  }
  return grid;
}

double hv_of(const std::vector<Vec>& objectives, const Vec& r) {
  ApproximationSet A;
  A.points = objectives;
  return hypervolume(A, r);
}

}  // namespace

std::size_t update_envelopes(EnvelopeState& env, const std::vector<double>& achievements) {
  if (env.incumbents.size() != achievements.size()) {
    throw std::invalid_argument("envelope length mismatch");
  }
  std::size_t changed = 0;
  for (std::size_t k = 0; k < achievements.size(); ++k) {
    if (achievements[k] < env.incumbents[k]) {
      env.incumbents[k] = achievements[k];
      ++changed;
    }
  }
  return changed;
}

Vec propose_next(const std::function<double(const Vec&)>& acquisition,
                 const Box& design_box, std::size_t search_budget, std::uint64_t seed) {
  if (search_budget == 0) throw std::invalid_argument("zero search budget");
  const std::size_t dim = design_box.lower.size();
  Rng rng(seed);

  auto draw_uniform = [&]() {
    Vec x(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      x[d] = rng.uniform(design_box.lower[d], design_box.upper[d]);
    }
    return x;
  };

  Vec best = draw_uniform();
  double best_val = acquisition(best);
  std::size_t used = 1;

  const std::size_t n_global = std::max<std::size_t>(1, (search_budget * 7) / 10);
  while (used < n_global) {
    Vec x = draw_uniform();
    const double v = acquisition(x);
    ++used;
    if (v > best_val) {
      best_val = v;
      best = x;
    }
  }

  // Local refinement: shrinking coordinate perturbations around the incumbent.
  double radius = 0.1;
  while (used < search_budget) {
    Vec x = best;
    const std::size_t d = rng.index(dim);
    const double span = design_box.upper[d] - design_box.lower[d];
    x[d] = std::clamp(x[d] + radius * span * (2.0 * rng.uniform() - 1.0),
                      design_box.lower[d], design_box.upper[d]);
    const double v = acquisition(x);
    ++used;
    if (v > best_val) {
      best_val = v;
      best = x;
    } else {
      radius = std::max(1e-4, radius * 0.97);
    }
  }
  return best;
}

namespace {

struct LoopState {
  std::vector<Vec> designs;
  std::vector<Vec> objectives;
  std::vector<std::vector<double>> achievements;  // row per design
  EnvelopeState env;
};

IterationRecord make_record(const LoopState& st, const RunConfig& cfg,
                            const TchebycheffParams& p, std::size_t iteration,
                            double acq_value) {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.design = st.designs[iteration];
  rec.objectives = st.objectives[iteration];
  if (!st.achievements.empty()) rec.achievements = st.achievements[iteration];
  rec.envelope = st.env.incumbents;
  rec.acquisition_value = acq_value;

  ApproximationSet A;
  A.points = st.objectives;
  if (!cfg.weights.empty()) {
    rec.discrete_r2 = discrete_r2(A, cfg.weights, p);
  }
  if (cfg.utopian.size() == 2) {
    rec.exact_r2 = r2_value_exact_2d(A, p, uniform_weight_density());
  }
  rec.hypervolume = hv_of(st.objectives, cfg.reference);
  return rec;
}

}  // namespace

RunHistory run_discrete_er2i_loop(const Problem& problem, const RunConfig& cfg) {
  if (cfg.mode == RunMode::ehvi) {
    throw std::invalid_argument("mode mismatch: expected an er2i mode");
  }
  validate_config(problem, cfg);
  if (cfg.weights.empty()) throw std::invalid_argument("empty weight set");
  if (!cfg.weight_scales.empty() && cfg.weight_scales.size() != cfg.weights.size()) {
    throw std::invalid_argument("weight scale length mismatch");
  }

  TchebycheffParams p;
  p.utopian = cfg.utopian;
  p.reference = cfg.reference;

  RunHistory hist;
  hist.config = cfg;

  const std::size_t K = cfg.weights.size();
  std::vector<double> scales = cfg.weight_scales;
  if (scales.empty()) scales.assign(K, 1.0 / static_cast<double>(K));

  LoopState st;
  st.env.weights = cfg.weights;
  st.env.incumbents.assign(K, std::numeric_limits<double>::infinity());

  auto evaluate_at = [&](const Vec& x) {
    st.designs.push_back(x);
    st.objectives.push_back(problem.objective_evaluator(x));
    std::vector<double> z(K);
    for (std::size_t k = 0; k < K; ++k) {
      z[k] = tcheby_value(st.objectives.back(), cfg.weights[k], p);
    }
    st.achievements.push_back(z);
    update_envelopes(st.env, z);
  };

  for (const Vec& x : initial_design(problem, cfg)) {
    evaluate_at(x);
    hist.records.push_back(make_record(st, cfg, p, st.designs.size() - 1, 0.0));
  }

  const std::vector<KernelGridPoint> grid = default_grid();
  for (std::size_t iter = cfg.n_initial; iter < cfg.budget; ++iter) {
    std::vector<GPModel> gps;
    try {
      std::vector<double> col0(st.designs.size());
      for (std::size_t i = 0; i < col0.size(); ++i) col0[i] = st.achievements[i][0];
      const Kernel kernel = select_hyperparameters(st.designs, col0, grid);
      gps.reserve(K);
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> target(st.designs.size());
        for (std::size_t i = 0; i < target.size(); ++i) {
          target[i] = st.achievements[i][k];
        }
        gps.push_back(GPModel::fit(st.designs, target, kernel));
      }
    } catch (const std::runtime_error& e) {
      hist.gp_failure = true;
      hist.failure_message = e.what();
      return hist;
    }

    auto acquisition = [&](const Vec& x) {
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += scales[k] * ei_shortfall(st.env.incumbents[k], gps[k].predict(x));
      }
      return total;
    };
    const Vec next = propose_next(acquisition, problem.design_box,
                                  cfg.acquisition_budget,
                                  cfg.seed * 1000003ull + iter);
    const double acq_value = acquisition(next);
    evaluate_at(next);
    hist.records.push_back(make_record(st, cfg, p, iter, acq_value));
  }
  return hist;
}

RunHistory run_ehvi_loop(const Problem& problem, const RunConfig& cfg) {
  if (cfg.mode != RunMode::ehvi) throw std::invalid_argument("mode mismatch: expected ehvi");
  validate_config(problem, cfg);
  if (problem.num_objectives != 2) {
    throw std::invalid_argument("ehvi loop supports two objectives");
  }

  TchebycheffParams p;
  p.utopian = cfg.utopian;
  p.reference = cfg.reference;

  RunHistory hist;
  hist.config = cfg;

  LoopState st;
  auto evaluate_at = [&](const Vec& x) {
    st.designs.push_back(x);
    st.objectives.push_back(problem.objective_evaluator(x));
  };

  for (const Vec& x : initial_design(problem, cfg)) {
    evaluate_at(x);
    hist.records.push_back(make_record(st, cfg, p, st.designs.size() - 1, 0.0));
  }

  const std::vector<KernelGridPoint> grid = default_grid();
  const std::size_t m = problem.num_objectives;
  for (std::size_t iter = cfg.n_initial; iter < cfg.budget; ++iter) {
    std::vector<GPModel> gps;
    try {
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> target(st.designs.size());
        for (std::size_t i = 0; i < target.size(); ++i) target[i] = st.objectives[i][j];
        const Kernel kernel = select_hyperparameters(st.designs, target, grid);
        gps.push_back(GPModel::fit(st.designs, target, kernel));
      }
    } catch (const std::runtime_error& e) {
      hist.gp_failure = true;
      hist.failure_message = e.what();
      return hist;
    }

    ApproximationSet A;
    A.points = st.objectives;
    const ApproximationSet front = pareto_filter(A);
    auto acquisition = [&](const Vec& x) {
      IndependentGaussianPrediction pred;
      pred.marginals.reserve(m);
      for (std::size_t j = 0; j < m; ++j) pred.marginals.push_back(gps[j].predict(x));
      return ehvi_exact(pred, front, cfg.reference);
    };
    const Vec next = propose_next(acquisition, problem.design_box,
                                  cfg.acquisition_budget,
                                  cfg.seed * 1000003ull + iter);
    const double acq_value = acquisition(next);
    evaluate_at(next);
    hist.records.push_back(make_record(st, cfg, p, iter, acq_value));
  }
  return hist;
}

Problem benchmark_biobjective() {
  Problem prob;
  prob.objective_evaluator = [](const Vec& x) {
    return Vec{x[0] * x[0], (1.0 - x[0]) * (1.0 - x[0])};
  };
  prob.design_box.lower = {0.0};
  prob.design_box.upper = {1.0};
  prob.num_objectives = 2;
  return prob;
}

std::vector<Vec> uniform_weights_2d(std::size_t k) {
  if (k < 2) throw std::invalid_argument("need at least two weights");
  std::vector<Vec> w;
  w.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double l = static_cast<double>(i) / static_cast<double>(k - 1);
    w.push_back(Vec{l, 1.0 - l});
  }
  return w;
}

}  // namespace pacq
