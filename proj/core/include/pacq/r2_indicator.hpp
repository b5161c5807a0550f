#ifndef PACQ_R2_INDICATOR_HPP
#define PACQ_R2_INDICATOR_HPP

#include <functional>
#include <optional>
#include <vector>

#include "pacq/pareto_geometry.hpp"
#include "pacq/quadrature.hpp"

namespace pacq {

/// Utopian anchor z+ and dystopian reference r for the Tchebycheff geometry.
struct TchebycheffParams {
  Vec utopian;
  Vec reference;
  Orientation orientation = Orientation::minimize;
};

/// Nonnegative density on the weight simplex; the default is uniform with
/// respect to the simplex measure convention (Lebesgue on lambda_1 for
/// m == 2, normalized surface measure for m >= 3).
using WeightDensity = std::function<double(const Vec&)>;
WeightDensity uniform_weight_density();

/// g_lambda(y; z+) = max_i lambda_i (y_i - z_i+).
double tcheby_value(const Vec& y, const Vec& lambda, const TchebycheffParams& p);

/// h_A(lambda) = min over A; ties resolved to the lowest point index.
double envelope_value(const ApproximationSet& A, const Vec& lambda,
                      const TchebycheffParams& p, std::size_t* witness = nullptr);

/// h_r(lambda) = g_lambda(r; z+).
double reference_envelope_value(const Vec& lambda, const TchebycheffParams& p);

struct EnvelopeSegment {
  double lo, hi;          // lambda_1 interval
  double slope, intercept;
  std::size_t witness;    // index into the source set
};

/// Exact lower envelope of lambda -> h_A(lambda, 1 - lambda) for m == 2,
/// built by divide-and-conquer merging of per-point max-of-two-lines pieces.
class PiecewiseLinearEnvelope {
 public:
  explicit PiecewiseLinearEnvelope(std::vector<EnvelopeSegment> segments);

  double value(double lambda1) const;
  std::size_t witness(double lambda1) const;
  const std::vector<EnvelopeSegment>& segments() const { return segments_; }

 private:
  std::vector<EnvelopeSegment> segments_;
};

PiecewiseLinearEnvelope envelope_piecewise_2d(const ApproximationSet& A,
                                              const TchebycheffParams& p);

/// R_{2,K}(A) = mean of envelope values over a finite weight set.
double discrete_r2(const ApproximationSet& A, const std::vector<Vec>& weights,
                   const TchebycheffParams& p);

/// I_{R_{2,K}}(A; r) = mean of clipped envelope gaps.
double discrete_r2_improvement(const ApproximationSet& A, const std::vector<Vec>& weights,
                               const TchebycheffParams& p);

/// Exact integral of h_A against rho over lambda_1 in [0, 1] (m == 2).
double r2_value_exact_2d(const ApproximationSet& A, const TchebycheffParams& p,
                         const WeightDensity& rho);

/// Exact integral of (h_r - h_A)_+ rho, with crossing breakpoints inserted.
double r2_improvement_exact_2d(const ApproximationSet& A, const TchebycheffParams& p,
                               const WeightDensity& rho);

/// Quadrature form for any m: sum w_l (h_r - h_A)_+ rho at the nodes.
double r2_improvement_quadrature(const ApproximationSet& A, const TchebycheffParams& p,
                                 const WeightDensity& rho,
                                 const SimplexQuadratureRule& rule);

/// Tchebycheff shadow [h_A(lambda), h_r(lambda)], empty if inverted.
struct ShadowInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
  double length() const { return empty ? 0.0 : hi - lo; }
};

ShadowInterval shadow_interval(const ApproximationSet& A, const Vec& lambda,
                               const TchebycheffParams& p);

enum class TsmMethod { exact_2d, quadrature };

/// Tchebycheff shadow magnitude: integral of shadow lengths against rho.
/// Equals the corresponding r2_improvement evaluation; computed here through
/// shadow_interval as an independent route so the identity can be tested.
double tsm(const ApproximationSet& A, const TchebycheffParams& p, const WeightDensity& rho,
           TsmMethod method, const SimplexQuadratureRule* rule = nullptr);

/// A_c = {(1, c)}: zero hypervolume contribution, positive R2 improvement.
struct NoWhvRecord {
  double hv_contribution;
  double r2_improvement;
};
NoWhvRecord verify_no_whv_example(double c);

/// Fixed two-set construction with equal reduced magnitude but different
/// exact R2 improvement.
struct MagnitudeRecord {
  double mag_a;
  double i_a;
  double mag_b;
  double i_b;
};
MagnitudeRecord verify_magnitude_example();

}  // namespace pacq

#endif
