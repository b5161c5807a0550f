#ifndef PACQ_PARETO_GEOMETRY_HPP
#define PACQ_PARETO_GEOMETRY_HPP

#include <cstddef>
#include <vector>

namespace pacq {

/// Objective vector in problem units. Length m is fixed per problem context.
using Vec = std::vector<double>;

enum class Orientation { minimize, maximize };

/// Coordinate-wise negation; an involution that flips orientation.
Vec negated(const Vec& v);

/// Finite approximation set with an orientation tag. All operations on the
/// set convert maximization inputs to the internal minimization convention
/// at the boundary.
struct ApproximationSet {
  std::vector<Vec> points;
  Orientation orientation = Orientation::minimize;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Axis-aligned box [lower, upper], lower <= upper coordinate-wise.
struct Box {
  Vec lower;
  Vec upper;
  double volume() const;
};

/// Strict Pareto dominance: a <= b coordinate-wise with at least one strict
/// inequality (minimization; mirrored for maximization).
bool dominates(const Vec& a, const Vec& b, Orientation o = Orientation::minimize);

/// Nondominated subset, stable order, first occurrence kept among duplicates.
ApproximationSet pareto_filter(const ApproximationSet& A);

struct SignedBox {
  Box box;
  int sign;  // +1 or -1
};

/// Decomposition of Dom_r(A). For m == 2 `boxes` holds interior-disjoint
/// horizontal strips from a sorted sweep; for m >= 3 `terms` holds the
/// signed inclusion-exclusion term list (|A| capped at 20).
struct DominatedRegionDecomposition {
  std::vector<Box> boxes;
  std::vector<SignedBox> terms;
  std::size_t clipped_points = 0;  // points clipped to the reference box
  double volume() const;
};

DominatedRegionDecomposition decompose_dominated_region(const ApproximationSet& A,
                                                        const Vec& r);

double hypervolume(const ApproximationSet& A, const Vec& r);

/// HV_r(A u {y}) - HV_r(A) >= 0.
double hvi(const Vec& y, const ApproximationSet& A, const Vec& r);

/// Simplicial cone given by an invertible generator matrix C (columns
/// generate the cone). L = C^-1 maps the cone order to the Pareto order.
struct SimplicialCone {
  std::vector<Vec> generators;  // row-major m x m matrix C
  std::vector<Vec> inverse;     // row-major L = C^-1
  double abs_determinant = 0.0;

  static SimplicialCone from_generators(const std::vector<Vec>& C);
  static SimplicialCone identity(std::size_t m);

  Vec apply_inverse(const Vec& y) const;  // L y
  Vec apply(const Vec& y) const;          // C y
  /// True when L is a positive scaled permutation, so that an independent
  /// coordinate model stays independent under L.
  bool inverse_is_scaled_permutation(double tol = 1e-12) const;
};

/// CHV_{C,r}(A) = |det C| HV_{Lr}(LA).
double cone_hypervolume(const ApproximationSet& A, const Vec& r,
                        const SimplicialCone& cone);

/// One coordinate of a desirability transform: piecewise-linear,
/// nondecreasing, defined on [knots_x.front(), knots_x.back()].
struct PiecewiseLinearMap {
  Vec knots_x;
  Vec knots_y;

  double operator()(double t) const;  // throws std::domain_error outside the knots
  double domain_lo() const { return knots_x.front(); }
  double domain_hi() const { return knots_x.back(); }
};

/// Coordinate-wise desirability maps T_j; the derivative kernels
/// k_j = T_j' are piecewise constant and nonnegative.
struct DesirabilityMap {
  std::vector<PiecewiseLinearMap> maps;

  Vec apply(const Vec& y) const;
  static DesirabilityMap identity(std::size_t m, double lo, double hi);
};

/// WHV with product density prod_j k_j = ordinary HV of the transformed set.
double whv_product_density(const ApproximationSet& A, const Vec& r,
                           const DesirabilityMap& d);

/// True iff every marginal kernel is positive a.e. on its reference-bounded
/// interval (all positive-length pieces below r_j have slope > 0).
bool kernel_admissible(const DesirabilityMap& d, const Vec& r);

/// Two-dimensional reduced magnitude of a box with side lengths (a, b):
/// (a + b)/2 + a b / 4.
double reduced_magnitude_box(double a, double b);

}  // namespace pacq

#endif
