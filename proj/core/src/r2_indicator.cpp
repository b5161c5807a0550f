#include "pacq/r2_indicator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pacq {

namespace {

constexpr double kTieTol = 1e-15;

double sgn_of(Orientation o) { return o == Orientation::minimize ? 1.0 : -1.0; }

struct Line {
  double slope;
  double intercept;
  std::size_t witness;
  double at(double x) const { return slope * x + intercept; }
};

void emit(std::vector<EnvelopeSegment>& out, double lo, double hi, const Line& l) {
  if (hi - lo <= 0.0) return;
  if (!out.empty()) {
    auto& last = out.back();
    if (last.witness == l.witness && std::abs(last.slope - l.slope) < 1e-14 &&
        std::abs(last.intercept - l.intercept) < 1e-14) {
      last.hi = hi;
      return;
    }
  }
  out.push_back(EnvelopeSegment{lo, hi, l.slope, l.intercept, l.witness});
}

// Lower of two lines on an interval, ties to the smaller witness index.
const Line& lower_of(const Line& a, const Line& b, double xm) {
  const double va = a.at(xm);
  const double vb = b.at(xm);
  if (std::abs(va - vb) <= kTieTol * (1.0 + std::abs(va))) {
    return a.witness <= b.witness ? a : b;
  }
  return va < vb ? a : b;
}

// Pointwise minimum of two piecewise-linear functions on [0, 1].
std::vector<EnvelopeSegment> merge_min(const std::vector<EnvelopeSegment>& a,
                                       const std::vector<EnvelopeSegment>& b) {
  std::vector<EnvelopeSegment> out;
  std::size_t i = 0, j = 0;
  double x = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x1 = std::min(a[i].hi, b[j].hi);
    if (x1 > x) {
      const Line la{a[i].slope, a[i].intercept, a[i].witness};
      const Line lb{b[j].slope, b[j].intercept, b[j].witness};
      const double ds = la.slope - lb.slope;
      const double db = la.intercept - lb.intercept;
      double xc = std::numeric_limits<double>::quiet_NaN();
      if (std::abs(ds) > 1e-14) xc = -db / ds;
      if (xc > x + 1e-14 && xc < x1 - 1e-14) {
        emit(out, x, xc, lower_of(la, lb, 0.5 * (x + xc)));
        emit(out, xc, x1, lower_of(la, lb, 0.5 * (xc + x1)));
      } else {
        emit(out, x, x1, lower_of(la, lb, 0.5 * (x + x1)));
      }
      x = x1;
    }
    if (a[i].hi <= x) ++i;
    if (j < b.size() && b[j].hi <= x) ++j;
  }
  return out;
}

// Envelope pieces of one point: the max of the two scalarization lines
// lambda * a1' and (1 - lambda) * a2'.
std::vector<EnvelopeSegment> point_envelope(double a1p, double a2p, std::size_t idx) {
  const Line l1{a1p, 0.0, idx};
  const Line l2{-a2p, a2p, idx};
  std::vector<EnvelopeSegment> out;
  auto upper_of = [&](double xm) -> const Line& {
    return l1.at(xm) >= l2.at(xm) ? l1 : l2;
  };
  const double denom = a1p + a2p;
  if (std::abs(denom) > 1e-300) {
    const double xc = a2p / denom;
    if (xc > 1e-14 && xc < 1.0 - 1e-14) {
      emit(out, 0.0, xc, upper_of(0.5 * xc));
      emit(out, xc, 1.0, upper_of(0.5 * (xc + 1.0)));
      return out;
    }
  }
  emit(out, 0.0, 1.0, upper_of(0.5));
  return out;
}

std::vector<EnvelopeSegment> build_envelope(const std::vector<Vec>& pts, const Vec& z,
                                            double sgn) {
  std::vector<std::vector<EnvelopeSegment>> queue;
  queue.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    queue.push_back(point_envelope(sgn * pts[i][0] - z[0], sgn * pts[i][1] - z[1], i));
  }
  // Balanced pairwise merging keeps intermediate envelopes small.
  while (queue.size() > 1) {
    std::vector<std::vector<EnvelopeSegment>> next;
    for (std::size_t i = 0; i + 1 < queue.size(); i += 2) {
      next.push_back(merge_min(queue[i], queue[i + 1]));
    }
    if (queue.size() % 2 == 1) next.push_back(std::move(queue.back()));
    queue = std::move(next);
  }
  return std::move(queue.front());
}

// 2-point Gauss nodes; exact for the (linear envelope) x (rho of degree <= 2)
// integrands used by the exact 2-D paths.
constexpr double kG2Lo = 0.21132486540518711775;
constexpr double kG2Hi = 0.78867513459481288225;

double integrate_line_rho(double lo, double hi, const std::function<double(double)>& f) {
  const double w = 0.5 * (hi - lo);
  const double x0 = lo + (hi - lo) * kG2Lo;
  const double x1 = lo + (hi - lo) * kG2Hi;
  return w * (f(x0) + f(x1));
}

void require_weight(const Vec& lambda, std::size_t m) {
  if (lambda.size() != m) throw std::invalid_argument("weight dimension mismatch");
  double sum = 0.0;
  for (double l : lambda) {
    if (l < -1e-12) throw std::invalid_argument("negative weight component");
    sum += l;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("weight must sum to 1");
}

}  // namespace

WeightDensity uniform_weight_density() {
  return [](const Vec&) { return 1.0; };
}

double tcheby_value(const Vec& y, const Vec& lambda, const TchebycheffParams& p) {
  if (y.size() != p.utopian.size()) throw std::invalid_argument("dimension mismatch");
  require_weight(lambda, y.size());
  const double sgn = sgn_of(p.orientation);
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i) {
    v = std::max(v, lambda[i] * (sgn * y[i] - sgn * p.utopian[i]));
  }
  return v;
}

double envelope_value(const ApproximationSet& A, const Vec& lambda,
                      const TchebycheffParams& p, std::size_t* witness) {
  if (A.empty()) throw std::invalid_argument("envelope of an empty set");
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < A.points.size(); ++i) {
    const double v = tcheby_value(A.points[i], lambda, p);
    if (v < best) {
      best = v;
      best_idx = i;
    }
  }
  if (witness) *witness = best_idx;
  return best;
}

double reference_envelope_value(const Vec& lambda, const TchebycheffParams& p) {
  return tcheby_value(p.reference, lambda, p);
}

PiecewiseLinearEnvelope::PiecewiseLinearEnvelope(std::vector<EnvelopeSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("empty envelope");
}

double PiecewiseLinearEnvelope::value(double lambda1) const {
  const auto& segs = segments_;
  auto it = std::upper_bound(
      segs.begin(), segs.end(), lambda1,
      [](double x, const EnvelopeSegment& s) { return x < s.hi; });
  const auto& s = (it == segs.end()) ? segs.back() : *it;
  return s.slope * lambda1 + s.intercept;
}

std::size_t PiecewiseLinearEnvelope::witness(double lambda1) const {
  const auto& segs = segments_;
  auto it = std::upper_bound(
      segs.begin(), segs.end(), lambda1,
      [](double x, const EnvelopeSegment& s) { return x < s.hi; });
  return ((it == segs.end()) ? segs.back() : *it).witness;
}

PiecewiseLinearEnvelope envelope_piecewise_2d(const ApproximationSet& A,
                                              const TchebycheffParams& p) {
  if (A.empty()) throw std::invalid_argument("envelope of an empty set");
  if (p.utopian.size() != 2) throw std::invalid_argument("m == 2 required");
  const ApproximationSet filtered = pareto_filter(A);
  const double sgn = sgn_of(p.orientation);
  Vec z = {sgn * p.utopian[0], sgn * p.utopian[1]};
  return PiecewiseLinearEnvelope(build_envelope(filtered.points, z, sgn));
}

double discrete_r2(const ApproximationSet& A, const std::vector<Vec>& weights,
                   const TchebycheffParams& p) {
  if (weights.empty()) throw std::invalid_argument("empty weight set");
  double sum = 0.0;
  for (const auto& l : weights) sum += envelope_value(A, l, p);
  return sum / static_cast<double>(weights.size());
}

double discrete_r2_improvement(const ApproximationSet& A, const std::vector<Vec>& weights,
                               const TchebycheffParams& p) {
  if (weights.empty()) throw std::invalid_argument("empty weight set");
  double sum = 0.0;
  for (const auto& l : weights) {
    const double gap = reference_envelope_value(l, p) - envelope_value(A, l, p);
    if (gap > 0.0) sum += gap;
  }
  return sum / static_cast<double>(weights.size());
}

namespace {

double density_at(const WeightDensity& rho, double lambda1) {
  return rho(Vec{lambda1, 1.0 - lambda1});
}

// Breakpoints of both envelopes merged, with sign-crossing points of
// (h_r - h_A) inserted so that the clipped gap is linear per cell.
std::vector<double> merged_breakpoints(const PiecewiseLinearEnvelope& env_a,
                                       const PiecewiseLinearEnvelope& env_r,
                                       bool insert_gap_roots) {
  std::vector<double> xs;
  for (const auto& s : env_a.segments()) xs.push_back(s.lo);
  for (const auto& s : env_r.segments()) xs.push_back(s.lo);
  xs.push_back(1.0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           xs.end());
  if (!insert_gap_roots) return xs;

  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    out.push_back(x0);
    const double g0 = env_r.value(x0) - env_a.value(x0);
    const double g1 = env_r.value(x1) - env_a.value(x1);
    if ((g0 > 0.0) != (g1 > 0.0) && g0 != g1) {
      const double xc = x0 + (x1 - x0) * (g0 / (g0 - g1));
      if (xc > x0 + 1e-14 && xc < x1 - 1e-14) out.push_back(xc);
    }
  }
  out.push_back(xs.back());
  return out;
}

}  // namespace

double r2_value_exact_2d(const ApproximationSet& A, const TchebycheffParams& p,
                         const WeightDensity& rho) {
  const PiecewiseLinearEnvelope env = envelope_piecewise_2d(A, p);
  double total = 0.0;
  for (const auto& s : env.segments()) {
    total += integrate_line_rho(s.lo, s.hi, [&](double x) {
      return (s.slope * x + s.intercept) * density_at(rho, x);
    });
  }
  return total;
}

double r2_improvement_exact_2d(const ApproximationSet& A, const TchebycheffParams& p,
                               const WeightDensity& rho) {
  if (A.empty()) {
    // Empty incumbent: the full reference envelope is the improvement.
    ApproximationSet ref_only;
    ref_only.orientation = p.orientation;
    ref_only.points.push_back(p.reference);
    TchebycheffParams pz = p;
    // h_r relative to an empty set is the whole reference envelope mass.
    const PiecewiseLinearEnvelope env_r = envelope_piecewise_2d(ref_only, pz);
    double total = 0.0;
    for (const auto& s : env_r.segments()) {
      total += integrate_line_rho(s.lo, s.hi, [&](double x) {
        const double v = s.slope * x + s.intercept;
        return (v > 0.0 ? v : 0.0) * density_at(rho, x);
      });
    }
    return total;
  }
  const PiecewiseLinearEnvelope env_a = envelope_piecewise_2d(A, p);
  ApproximationSet ref_only;
  ref_only.orientation = p.orientation;
  ref_only.points.push_back(p.reference);
  const PiecewiseLinearEnvelope env_r = envelope_piecewise_2d(ref_only, p);

  const std::vector<double> xs = merged_breakpoints(env_a, env_r, true);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double mid = 0.5 * (xs[i] + xs[i + 1]);
    if (env_r.value(mid) - env_a.value(mid) <= 0.0) continue;
    total += integrate_line_rho(xs[i], xs[i + 1], [&](double x) {
      const double gap = env_r.value(x) - env_a.value(x);
      return (gap > 0.0 ? gap : 0.0) * density_at(rho, x);
    });
  }
  return total;
}

double r2_improvement_quadrature(const ApproximationSet& A, const TchebycheffParams& p,
                                 const WeightDensity& rho,
                                 const SimplexQuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t l = 0; l < rule.size(); ++l) {
    const Vec& lambda = rule.nodes[l];
    const double h_r = reference_envelope_value(lambda, p);
    const double h_a = A.empty() ? 0.0 : envelope_value(A, lambda, p);
    const double gap = A.empty() ? std::max(h_r, 0.0) : h_r - h_a;
    if (gap > 0.0) total += rule.weights[l] * gap * rho(lambda);
  }
  return total;
}

ShadowInterval shadow_interval(const ApproximationSet& A, const Vec& lambda,
                               const TchebycheffParams& p) {
  ShadowInterval sh;
  const double h_a = envelope_value(A, lambda, p);
  const double h_r = reference_envelope_value(lambda, p);
  if (h_a <= h_r) {
    sh.lo = h_a;
    sh.hi = h_r;
    sh.empty = false;
  }
  return sh;
}

double tsm(const ApproximationSet& A, const TchebycheffParams& p, const WeightDensity& rho,
           TsmMethod method, const SimplexQuadratureRule* rule) {
  if (A.empty()) throw std::invalid_argument("tsm of an empty set");
  if (method == TsmMethod::quadrature) {
    if (!rule) throw std::invalid_argument("quadrature tsm needs a rule");
    double total = 0.0;
    for (std::size_t l = 0; l < rule->size(); ++l) {
      const ShadowInterval sh = shadow_interval(A, rule->nodes[l], p);
      total += rule->weights[l] * sh.length() * rho(rule->nodes[l]);
    }
    return total;
  }

  // exact_2d: shared breakpoints, but the integrand is evaluated through
  // shadow_interval directly rather than the piecewise representation.
  const PiecewiseLinearEnvelope env_a = envelope_piecewise_2d(A, p);
  ApproximationSet ref_only;
  ref_only.orientation = p.orientation;
  ref_only.points.push_back(p.reference);
  const PiecewiseLinearEnvelope env_r = envelope_piecewise_2d(ref_only, p);
  const std::vector<double> xs = merged_breakpoints(env_a, env_r, true);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    total += integrate_line_rho(xs[i], xs[i + 1], [&](double x) {
      const Vec lambda{x, 1.0 - x};
      return shadow_interval(A, lambda, p).length() * rho(lambda);
    });
  }
  return total;
}

NoWhvRecord verify_no_whv_example(double c) {
  if (c <= 0.0 || c >= 1.0) throw std::invalid_argument("c must lie in (0, 1)");
  TchebycheffParams p;
  p.utopian = {0.0, 0.0};
  p.reference = {1.0, 1.0};
  ApproximationSet A;
  A.points = {{1.0, c}};
  NoWhvRecord rec;
  rec.hv_contribution = hypervolume(A, p.reference);
  rec.r2_improvement = r2_improvement_exact_2d(A, p, uniform_weight_density());
  return rec;
}

MagnitudeRecord verify_magnitude_example() {
  TchebycheffParams p;
  p.utopian = {0.0, 0.0};
  p.reference = {1.0, 1.0};
  const double s = 3.0 - std::sqrt(6.0);
  const double side = std::sqrt(6.0) - 2.0;  // 1 - s

  MagnitudeRecord rec;
  rec.mag_a = reduced_magnitude_box(0.0, 1.0);
  rec.mag_b = reduced_magnitude_box(side, side);
  ApproximationSet A;
  A.points = {{0.0, 1.0}};
  ApproximationSet B;
  B.points = {{s, s}};
  rec.i_a = r2_improvement_exact_2d(A, p, uniform_weight_density());
  rec.i_b = r2_improvement_exact_2d(B, p, uniform_weight_density());
  return rec;
}

}  // namespace pacq
