#ifndef PACQ_QUADRATURE_HPP
#define PACQ_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "pacq/pareto_geometry.hpp"

namespace pacq {

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9, int max_depth = 50);

/// n-point Gauss-Legendre rule on [0, 1]; weights sum to 1.
void gauss_legendre_unit(std::size_t n, Vec* nodes, Vec* weights);

/// Quadrature rule on the weight simplex. Nodes are full barycentric weight
/// vectors; the weight normalization matches the density convention:
/// Lebesgue measure on lambda_1 in [0,1] for m == 2, normalized surface
/// measure (weights summing to 1) for m >= 3.
struct SimplexQuadratureRule {
  std::vector<Vec> nodes;
  Vec weights;

  std::size_t size() const { return nodes.size(); }
  std::size_t dimension() const { return nodes.empty() ? 0 : nodes.front().size(); }
};

/// m == 2: Gauss-Legendre in lambda_1 on [0, 1].
SimplexQuadratureRule simplex_rule_gauss_2d(std::size_t n);

/// m == 3: barycentric subdivision into n^2 congruent triangles with a
/// centroid node per cell and equal weights 1/n^2.
SimplexQuadratureRule simplex_rule_centroid_3d(std::size_t n);

/// Any m >= 2: seeded Dirichlet(1,...,1) sampling with equal weights.
SimplexQuadratureRule simplex_rule_dirichlet(std::size_t m, std::size_t count,
                                             std::uint64_t seed);

/// Convenience picker: Gauss for m == 2, centroid subdivision for m == 3
/// (n chosen so that the node count is at least `min_nodes`).
SimplexQuadratureRule make_simplex_rule(std::size_t m, std::size_t min_nodes);

}  // namespace pacq

#endif
