#ifndef PACQ_BO_DRIVER_HPP
#define PACQ_BO_DRIVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pacq/er2i.hpp"
#include "pacq/pareto_geometry.hpp"
#include "pacq/r2_indicator.hpp"
#include "pacq/surrogate_gp.hpp"

namespace pacq {

struct Problem {
  std::function<Vec(const Vec&)> objective_evaluator;
  Box design_box;  // lower/upper per design dimension
  std::size_t num_objectives = 0;
};

enum class RunMode { discrete_er2i, quadrature_er2i, ehvi };

struct RunConfig {
  RunMode mode = RunMode::discrete_er2i;
  std::vector<Vec> weights;           // Lambda_K for discrete mode
  std::vector<double> weight_scales;  // quadrature weights x density; 1/K if empty
  Vec utopian;
  Vec reference;
  std::size_t budget = 30;
  std::size_t n_initial = 5;
  std::uint64_t seed = 0;
  std::size_t acquisition_budget = 1000;
};

struct IterationRecord {
  std::size_t iteration = 0;
  Vec design;
  Vec objectives;
  std::vector<double> achievements;  // z_{ik} per weight (ER2I modes)
  std::vector<double> envelope;      // h_{n,k} after this evaluation
  double acquisition_value = 0.0;    // 0 for initial-design rows
  double discrete_r2 = 0.0;
  double exact_r2 = 0.0;  // m == 2 only, else 0
  double hypervolume = 0.0;
};

struct RunHistory {
  RunConfig config;
  std::vector<IterationRecord> records;
  bool gp_failure = false;
  std::string failure_message;
};

/// Per-entry min update; returns how many entries changed.
std::size_t update_envelopes(EnvelopeState& env, const std::vector<double>& achievements);

/// Multistart random search with local coordinate refinement. Deterministic
/// per seed; ties keep the earliest probed candidate.
Vec propose_next(const std::function<double(const Vec&)>& acquisition,
                 const Box& design_box, std::size_t search_budget, std::uint64_t seed);

RunHistory run_discrete_er2i_loop(const Problem& problem, const RunConfig& cfg);
RunHistory run_ehvi_loop(const Problem& problem, const RunConfig& cfg);

/// f(x) = (x^2, (1-x)^2) on [0, 1]; the standard two-objective benchmark here.
Problem benchmark_biobjective();

/// K evenly spaced boundary-inclusive weights on the 2-simplex.
std::vector<Vec> uniform_weights_2d(std::size_t k);

}  // namespace pacq

#endif
