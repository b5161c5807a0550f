// pareto-acq: hypervolume / R2 indicator computations, expected-improvement
// acquisitions, counterexample verification, and sequential optimization runs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pacq/bo_driver.hpp"
#include "pacq/ehvi.hpp"
#include "pacq/er2i.hpp"
#include "pacq/io.hpp"
#include "pacq/pareto_geometry.hpp"
#include "pacq/r2_indicator.hpp"

using nlohmann::json;
using namespace pacq;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDimension = 3;
constexpr int kExitExact2d = 4;
constexpr int kExitVerifyFail = 5;
constexpr int kExitGpFailure = 6;

struct CliError {
  int code;
  std::string message;
};

std::string fixed12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  return buf;
}

// Configuration document shared by the indicator commands and `run`.
struct Config {
  Orientation orientation = Orientation::minimize;
  Vec reference;
  Vec utopian;
  std::vector<Vec> weights;
  std::optional<std::pair<std::string, std::size_t>> rule;  // type, size
  std::string rho = "uniform";
  std::uint64_t seed = 0;
  std::size_t budget = 30;
  std::size_t n_initial = 5;
  std::string mode = "discrete_er2i";
};

Vec parse_json_vec(const json& j, const char* what) {
  if (!j.is_array()) throw CliError{kExitParse, std::string(what) + " must be an array"};
  Vec v;
  for (const auto& e : j) {
    if (!e.is_number()) throw CliError{kExitParse, std::string(what) + " must be numeric"};
    v.push_back(e.get<double>());
  }
  return v;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitParse, "cannot open config file: " + path};
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw CliError{kExitParse, std::string("config parse error: ") + e.what()};
  }
  if (!doc.is_object()) throw CliError{kExitParse, "config must be a JSON object"};

  static const std::vector<std::string> known = {
      "orientation", "reference", "utopian", "weights", "rho",
      "seed",        "budget",    "mode",    "n_initial"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw CliError{kExitParse, "unknown config key: " + key};
    }
  }

  Config cfg;
  if (doc.contains("orientation")) {
    const std::string o = doc["orientation"].get<std::string>();
    if (o == "min") {
      cfg.orientation = Orientation::minimize;
    } else if (o == "max") {
      cfg.orientation = Orientation::maximize;
    } else {
      throw CliError{kExitParse, "orientation must be \"min\" or \"max\""};
    }
  }
  if (doc.contains("reference")) cfg.reference = parse_json_vec(doc["reference"], "reference");
  if (doc.contains("utopian")) cfg.utopian = parse_json_vec(doc["utopian"], "utopian");
  if (doc.contains("rho")) {
    cfg.rho = doc["rho"].get<std::string>();
    if (cfg.rho != "uniform") throw CliError{kExitParse, "unsupported rho: " + cfg.rho};
  }
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("budget")) cfg.budget = doc["budget"].get<std::size_t>();
  if (doc.contains("n_initial")) cfg.n_initial = doc["n_initial"].get<std::size_t>();
  if (doc.contains("mode")) cfg.mode = doc["mode"].get<std::string>();
  if (doc.contains("weights")) {
    const json& w = doc["weights"];
    if (w.is_array()) {
      for (const auto& row : w) cfg.weights.push_back(parse_json_vec(row, "weights row"));
    } else if (w.is_object() && w.contains("uniform")) {
      if (w.size() != 1) throw CliError{kExitParse, "malformed weights object"};
      cfg.weights = uniform_weights_2d(w["uniform"].get<std::size_t>());
    } else if (w.is_object() && w.contains("rule")) {
      if (w.size() != 1) throw CliError{kExitParse, "malformed weights object"};
      const json& r = w["rule"];
      cfg.rule = {r.value("type", std::string("gauss_2d")), r.value("n", std::size_t{64})};
    } else {
      throw CliError{kExitParse, "malformed weights entry"};
    }
  }
  return cfg;
}

std::vector<Vec> load_points(const std::string& path) {
  try {
    return read_points_csv_file(path);
  } catch (const std::exception& e) {
    throw CliError{kExitParse, e.what()};
  }
}

void check_dimensions(const std::vector<Vec>& points, const Vec& reference) {
  if (reference.empty()) throw CliError{kExitDimension, "reference vector required"};
  for (const auto& p : points) {
    if (p.size() != reference.size()) {
      throw CliError{kExitDimension, "point/reference dimension mismatch"};
    }
  }
}

Vec parse_comma_list(const std::string& s, const char* what) {
  Vec out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CliError{kExitParse, std::string("malformed ") + what + " entry: " + tok};
    }
  }
  if (out.empty()) throw CliError{kExitParse, std::string("empty ") + what + " list"};
  return out;
}

void check_threads_env() {
  const char* raw = std::getenv("PARETO_ACQ_THREADS");
  if (!raw) return;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 0) {
    throw CliError{kExitParse, "PARETO_ACQ_THREADS must be a nonnegative integer"};
  }
  // Value 0 means auto; all current code paths are single-threaded, so the
  // cap is accepted and recorded but has no effect.
}

int cmd_hv(const std::string& points_file, const std::string& config_file,
           const std::string& reference_flag, const std::string& decompose_out) {
  Config cfg;
  if (!config_file.empty()) cfg = load_config(config_file);
  if (!reference_flag.empty()) cfg.reference = parse_comma_list(reference_flag, "reference");
  const std::vector<Vec> pts = load_points(points_file);
  if (pts.empty()) {
    std::cout << fixed12(0.0) << "\n";
    return 0;
  }
  check_dimensions(pts, cfg.reference);
  ApproximationSet A;
  A.points = pts;
  A.orientation = cfg.orientation;
  std::cout << fixed12(hypervolume(A, cfg.reference)) << "\n";
  if (!decompose_out.empty()) {
    const DominatedRegionDecomposition dec = decompose_dominated_region(A, cfg.reference);
    std::ofstream out(decompose_out);
    out << "sign";
    for (std::size_t j = 0; j < cfg.reference.size(); ++j) out << ",lo" << (j + 1);
    for (std::size_t j = 0; j < cfg.reference.size(); ++j) out << ",hi" << (j + 1);
    out << "\n";
    if (!dec.terms.empty()) {
      for (const auto& b : dec.terms) {
        out << b.sign;
        for (double v : b.box.lower) out << "," << format_double(v);
        for (double v : b.box.upper) out << "," << format_double(v);
        out << "\n";
      }
    } else {
      for (const auto& b : dec.boxes) {
        out << 1;
        for (double v : b.lower) out << "," << format_double(v);
        for (double v : b.upper) out << "," << format_double(v);
        out << "\n";
      }
    }
  }
  return 0;
}

int cmd_ehvi(const std::string& points_file, const std::string& config_file,
             const std::string& reference_flag, const std::string& mean_flag,
             const std::string& std_flag, std::size_t mc_samples, std::uint64_t seed) {
  Config cfg;
  if (!config_file.empty()) cfg = load_config(config_file);
  if (!reference_flag.empty()) cfg.reference = parse_comma_list(reference_flag, "reference");
  const std::vector<Vec> pts = load_points(points_file);
  check_dimensions(pts, cfg.reference);
  const Vec mean = parse_comma_list(mean_flag, "mean");
  const Vec stddev = parse_comma_list(std_flag, "std");
  if (mean.size() != cfg.reference.size() || stddev.size() != cfg.reference.size()) {
    throw CliError{kExitDimension, "prediction/reference dimension mismatch"};
  }
  IndependentGaussianPrediction pred;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    pred.marginals.push_back({mean[i], stddev[i]});
  }
  ApproximationSet A;
  A.points = pts;
  if (mc_samples > 0) {
    const McEstimate est = ehvi_mc_oracle(pred, A, cfg.reference, mc_samples, seed);
    std::cout << fixed12(est.estimate) << " " << fixed12(est.std_error) << "\n";
  } else {
    std::cout << fixed12(ehvi_exact(pred, A, cfg.reference)) << "\n";
  }
  return 0;
}

int cmd_r2(const std::string& points_file, const std::string& config_file, bool exact2d,
           std::size_t quad_nodes, std::size_t discrete_k,
           const std::string& envelope_out) {
  if (config_file.empty()) throw CliError{kExitParse, "--config required for r2"};
  const Config cfg = load_config(config_file);
  const std::vector<Vec> pts = load_points(points_file);
  if (cfg.utopian.empty() || cfg.reference.empty()) {
    throw CliError{kExitDimension, "utopian and reference required"};
  }
  check_dimensions(pts, cfg.reference);

  TchebycheffParams p;
  p.utopian = cfg.utopian;
  p.reference = cfg.reference;
  p.orientation = cfg.orientation;
  ApproximationSet A;
  A.points = pts;
  A.orientation = cfg.orientation;
  const std::size_t m = cfg.reference.size();

  double r2 = 0.0;
  double improvement = 0.0;
  if (exact2d) {
    if (m != 2) throw CliError{kExitExact2d, "--exact2d requires two objectives"};
    r2 = r2_value_exact_2d(A, p, uniform_weight_density());
    improvement = r2_improvement_exact_2d(A, p, uniform_weight_density());
  } else if (quad_nodes > 0) {
    const SimplexQuadratureRule rule = make_simplex_rule(m, quad_nodes);
    double sum = 0.0;
    for (std::size_t l = 0; l < rule.size(); ++l) {
      sum += rule.weights[l] * envelope_value(A, rule.nodes[l], p);
    }
    r2 = sum;
    improvement = r2_improvement_quadrature(A, p, uniform_weight_density(), rule);
  } else {
    const std::size_t k = discrete_k > 0 ? discrete_k : 11;
    if (m != 2) throw CliError{kExitDimension, "--discrete weights are two-objective"};
    const std::vector<Vec> weights = uniform_weights_2d(k);
    r2 = discrete_r2(A, weights, p);
    improvement = discrete_r2_improvement(A, weights, p);
  }
  std::cout << "r2 " << fixed12(r2) << "\n";
  std::cout << "improvement " << fixed12(improvement) << "\n";

  if (!envelope_out.empty()) {
    if (m != 2) throw CliError{kExitExact2d, "--envelope requires two objectives"};
    std::ofstream out(envelope_out);
    out << "lambda,h_A,h_r,gap\n";
    const std::size_t n = 512;
    for (std::size_t i = 0; i <= n; ++i) {
      const double l1 = static_cast<double>(i) / static_cast<double>(n);
      const Vec lambda{l1, 1.0 - l1};
      const double ha = envelope_value(A, lambda, p);
      const double hr = reference_envelope_value(lambda, p);
      out << format_double(l1) << "," << format_double(ha) << "," << format_double(hr)
          << "," << format_double(std::max(0.0, hr - ha)) << "\n";
    }
  }
  return 0;
}

int cmd_er2i(const std::string& points_file, const std::string& config_file,
             std::size_t discrete_k, std::size_t quad_nodes, const std::string& mean_flag,
             const std::string& std_flag) {
  if (config_file.empty()) throw CliError{kExitParse, "--config required for er2i"};
  const Config cfg = load_config(config_file);
  const std::vector<Vec> pts = load_points(points_file);
  if (cfg.utopian.empty()) throw CliError{kExitDimension, "utopian required"};
  const Vec mean = parse_comma_list(mean_flag, "mean");
  const Vec stddev = parse_comma_list(std_flag, "std");
  if (mean.size() != stddev.size()) {
    throw CliError{kExitDimension, "mean/std length mismatch"};
  }

  TchebycheffParams p;
  p.utopian = cfg.utopian;
  p.reference = cfg.reference;
  p.orientation = cfg.orientation;
  ApproximationSet A;
  A.points = pts;
  A.orientation = cfg.orientation;

  if (quad_nodes > 0) {
    // Integral form under independent objective Gaussians.
    const std::size_t m = cfg.utopian.size();
    if (mean.size() != m) throw CliError{kExitDimension, "prediction dimension mismatch"};
    check_dimensions(pts, cfg.utopian);
    IndependentGaussianPrediction pred;
    for (std::size_t i = 0; i < m; ++i) pred.marginals.push_back({mean[i], stddev[i]});
    const SimplexQuadratureRule rule = make_simplex_rule(m, quad_nodes);
    double total = 0.0;
    for (std::size_t l = 0; l < rule.size(); ++l) {
      total += rule.weights[l] * objective_gaussian_integrand(pred, A, rule.nodes[l], p);
    }
    std::cout << fixed12(total) << "\n";
    return 0;
  }

  // Discrete achievement form: K Gaussian achievement predictions against
  // the per-weight incumbents of the points file.
  const std::size_t k = discrete_k > 0 ? discrete_k : mean.size();
  if (mean.size() != k) throw CliError{kExitDimension, "need one prediction per weight"};
  if (cfg.utopian.size() != 2 && cfg.weights.empty()) {
    throw CliError{kExitDimension, "explicit weights required beyond two objectives"};
  }
  const std::vector<Vec> weights =
      cfg.weights.empty() ? uniform_weights_2d(k) : cfg.weights;
  if (weights.size() != k) throw CliError{kExitDimension, "weight count mismatch"};
  check_dimensions(pts, cfg.utopian);
  std::vector<double> incumbents(k);
  for (std::size_t i = 0; i < k; ++i) {
    double h = std::numeric_limits<double>::infinity();
    for (const auto& y : pts) h = std::min(h, tcheby_value(y, weights[i], p));
    incumbents[i] = h;
  }
  std::vector<Gaussian1D> preds(k);
  for (std::size_t i = 0; i < k; ++i) preds[i] = {mean[i], stddev[i]};
  std::cout << fixed12(er2i_discrete(preds, incumbents)) << "\n";
  return 0;
}

int cmd_verify(const std::string& which, double c, std::uint64_t seed) {
  json report;
  bool pass = false;
  if (which == "no-whv") {
    const NoWhvRecord rec = verify_no_whv_example(c);
    pass = rec.hv_contribution == 0.0 && rec.r2_improvement > 0.0;
    report = {{"c", c},
              {"hv", rec.hv_contribution},
              {"i_r2", rec.r2_improvement},
              {"pass", pass}};
  } else if (which == "magnitude") {
    const MagnitudeRecord rec = verify_magnitude_example();
    pass = std::abs(rec.mag_a - rec.mag_b) < 1e-12 &&
           std::abs(rec.i_a - rec.i_b) > 1e-3;
    report = {{"mag_A", rec.mag_a},
              {"mag_B", rec.mag_b},
              {"i_A", rec.i_a},
              {"i_B", rec.i_b},
              {"pass", pass}};
  } else if (which == "tehvi-variance") {
    CounterexampleSearchConfig scfg;
    scfg.seed = seed;
    const TehviVarianceCounterexample rec = find_tehvi_variance_counterexample(scfg);
    pass = rec.found;
    report = {{"found", rec.found},
              {"mu", rec.mu},
              {"sigma", rec.sigma},
              {"sigma_prime", rec.sigma_prime},
              {"A", rec.set},
              {"r", rec.reference},
              {"roi_lower", rec.roi.lower},
              {"roi_upper", rec.roi.upper},
              {"tehvi_hi", rec.tehvi_hi},
              {"tehvi_lo", rec.tehvi_lo},
              {"seed", rec.seed},
              {"trials", rec.trials_used},
              {"pass", pass}};
  } else if (which == "er2i-variance") {
    CounterexampleSearchConfig scfg;
    scfg.seed = seed;
    const Er2iVarianceCounterexample rec = find_er2i_variance_counterexample(scfg);
    pass = rec.found;
    report = {{"found", rec.found},
              {"mu", rec.mu},
              {"sigma", rec.sigma},
              {"sigma_prime", rec.sigma_prime},
              {"lambda", rec.lambda},
              {"A", rec.set.points},
              {"value_hi", rec.value_hi},
              {"value_lo", rec.value_lo},
              {"seed", rec.seed},
              {"trials", rec.trials_used},
              {"pass", pass}};
  } else {
    throw CliError{kExitParse, "unknown verification: " + which};
  }
  std::cout << report.dump(2) << "\n";
  return pass ? 0 : kExitVerifyFail;
}

int cmd_run(const std::string& config_file, const std::string& out_dir) {
  if (config_file.empty()) throw CliError{kExitParse, "--config required for run"};
  const Config cfg = load_config(config_file);

  RunConfig rc;
  rc.utopian = cfg.utopian;
  rc.reference = cfg.reference;
  rc.budget = cfg.budget;
  rc.n_initial = cfg.n_initial;
  rc.seed = cfg.seed;
  if (cfg.mode == "discrete_er2i") {
    rc.mode = RunMode::discrete_er2i;
  } else if (cfg.mode == "quadrature_er2i") {
    rc.mode = RunMode::quadrature_er2i;
  } else if (cfg.mode == "ehvi") {
    rc.mode = RunMode::ehvi;
  } else {
    throw CliError{kExitParse, "unknown mode: " + cfg.mode};
  }
  if (rc.mode == RunMode::quadrature_er2i) {
    std::size_t n = 32;
    std::string type = "gauss_2d";
    if (cfg.rule) {
      type = cfg.rule->first;
      n = cfg.rule->second;
    }
    SimplexQuadratureRule rule;
    if (type == "gauss_2d") {
      rule = simplex_rule_gauss_2d(n);
    } else if (type == "centroid_3d") {
      rule = simplex_rule_centroid_3d(n);
    } else if (type == "dirichlet") {
      rule = simplex_rule_dirichlet(cfg.utopian.size(), n, cfg.seed);
    } else {
      throw CliError{kExitParse, "unknown rule type: " + type};
    }
    rc.weights = rule.nodes;
    rc.weight_scales.assign(rule.weights.begin(), rule.weights.end());
  } else if (rc.mode == RunMode::discrete_er2i) {
    rc.weights = cfg.weights.empty() ? uniform_weights_2d(11) : cfg.weights;
  } else if (!cfg.weights.empty()) {
    rc.weights = cfg.weights;  // used for the R2 trace only
  }
  if (rc.mode == RunMode::ehvi && rc.weights.empty()) {
    rc.weights = uniform_weights_2d(11);
  }

  const Problem problem = benchmark_biobjective();
  if (rc.utopian.size() != problem.num_objectives ||
      rc.reference.size() != problem.num_objectives) {
    throw CliError{kExitDimension, "config dimensions do not match the problem"};
  }

  RunHistory hist;
  try {
    hist = rc.mode == RunMode::ehvi ? run_ehvi_loop(problem, rc)
                                    : run_discrete_er2i_loop(problem, rc);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitParse, e.what()};
  }

  const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "history.jsonl", std::ios::binary);
    write_history_jsonl(out, hist);
  }
  {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    write_summary_json(out, hist);
  }
  {
    std::ofstream out(dir / "traces.csv", std::ios::binary);
    write_traces_csv(out, hist);
  }
  if (hist.gp_failure) {
    std::cerr << "surrogate fit failed: " << hist.failure_message << "\n";
    return kExitGpFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto indicator and acquisition toolkit"};
  app.require_subcommand(1);

  std::string config_file;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("--config", config_file, "JSON configuration file");
  app.add_option("--seed", seed, "Seed override for sampling commands");
  app.add_option("--out", out_dir, "Output directory for run artifacts");

  std::string points_file;
  std::string reference_flag;
  std::string decompose_out;
  auto* hv = app.add_subcommand("hv", "Dominated hypervolume of a point set");
  hv->add_option("points", points_file, "Points CSV")->required();
  hv->add_option("--reference", reference_flag, "Reference point (comma list)");
  hv->add_option("--decompose", decompose_out, "Write signed box decomposition CSV");

  std::string mean_flag;
  std::string std_flag;
  std::size_t mc_samples = 0;
  auto* ehvi = app.add_subcommand("ehvi", "Expected hypervolume improvement");
  ehvi->add_option("points", points_file, "Points CSV")->required();
  ehvi->add_option("--reference", reference_flag, "Reference point (comma list)");
  ehvi->add_option("--mean", mean_flag, "Predictive means (comma list)")->required();
  ehvi->add_option("--std", std_flag, "Predictive standard deviations")->required();
  ehvi->add_option("--mc", mc_samples, "Monte-Carlo sample count (0 = exact)");

  bool exact2d = false;
  std::size_t quad_nodes = 0;
  std::size_t discrete_k = 0;
  std::string envelope_out;
  auto* r2 = app.add_subcommand("r2", "R2 indicator value and improvement");
  r2->add_option("points", points_file, "Points CSV")->required();
  r2->add_flag("--exact2d", exact2d, "Exact piecewise-linear integration (m = 2)");
  r2->add_option("--quadrature", quad_nodes, "Simplex quadrature with L nodes");
  r2->add_option("--discrete", discrete_k, "Discrete uniform weight set of size K");
  r2->add_option("--envelope", envelope_out, "Write lambda,h_A,h_r,gap CSV");

  auto* er2i = app.add_subcommand("er2i", "Expected R2 improvement");
  er2i->add_option("points", points_file, "Points CSV")->required();
  er2i->add_option("--discrete", discrete_k, "Discrete mode with K weights");
  er2i->add_option("--quadrature", quad_nodes, "Integral mode with L nodes");
  er2i->add_option("--mean", mean_flag, "Predictive means (comma list)")->required();
  er2i->add_option("--std", std_flag, "Predictive standard deviations")->required();

  std::string which;
  double c_param = 0.5;
  auto* verify = app.add_subcommand("verify", "Run a named verification");
  verify->add_option("which", which, "no-whv | magnitude | tehvi-variance | er2i-variance")
      ->required();
  verify->add_option("--c", c_param, "Parameter of the no-whv construction");

  auto* run = app.add_subcommand("run", "Execute a sequential optimization loop");
  (void)run;

  // Global options (--config, --seed, --out) may appear after the subcommand
  // name; let unmatched subcommand arguments fall through to the parent.
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
    sc->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    check_threads_env();
    if (hv->parsed()) return cmd_hv(points_file, config_file, reference_flag, decompose_out);
    if (ehvi->parsed()) {
      return cmd_ehvi(points_file, config_file, reference_flag, mean_flag, std_flag,
                      mc_samples, seed);
    }
    if (r2->parsed()) {
      return cmd_r2(points_file, config_file, exact2d, quad_nodes, discrete_k,
                    envelope_out);
    }
    if (er2i->parsed()) {
      return cmd_er2i(points_file, config_file, discrete_k, quad_nodes, mean_flag,
                      std_flag);
    }
    if (verify->parsed()) return cmd_verify(which, c_param, seed);
    if (run->parsed()) return cmd_run(config_file, out_dir);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
