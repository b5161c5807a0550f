#include "pacq/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "pacq/rng.hpp"

namespace pacq {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole,
                            double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

void gauss_legendre_unit(std::size_t n, Vec* nodes, Vec* weights) {
  if (n == 0) throw std::invalid_argument("empty quadrature rule");
  nodes->assign(n, 0.0);
  weights->assign(n, 0.0);
  // Newton iteration on P_n over [-1, 1], then map to [0, 1].
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    (*nodes)[i] = 0.5 * (1.0 - x);  // descending x -> ascending node
    (*nodes)[n - 1 - i] = 0.5 * (1.0 + x);
    (*weights)[i] = 0.5 * w;
    (*weights)[n - 1 - i] = 0.5 * w;
  }
}

SimplexQuadratureRule simplex_rule_gauss_2d(std::size_t n) {
  Vec x, w;
  gauss_legendre_unit(n, &x, &w);
  SimplexQuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes.push_back({x[i], 1.0 - x[i]});
    rule.weights.push_back(w[i]);
  }
  return rule;
}

SimplexQuadratureRule simplex_rule_centroid_3d(std::size_t n) {
  if (n == 0) throw std::invalid_argument("empty quadrature rule");
  SimplexQuadratureRule rule;
  const double w = 1.0 / static_cast<double>(n * n);
  const double inv3n = 1.0 / (3.0 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + i < n; ++j) {
      // upward cell centroid
      const double l1 = (3.0 * i + 1.0) * inv3n;
      const double l2 = (3.0 * j + 1.0) * inv3n;
      rule.nodes.push_back({l1, l2, 1.0 - l1 - l2});
      rule.weights.push_back(w);
      if (j + i + 2 <= n) {
        // downward cell centroid
        const double d1 = (3.0 * i + 2.0) * inv3n;
        const double d2 = (3.0 * j + 2.0) * inv3n;
        if (d1 + d2 < 1.0 + 1e-12) {
          rule.nodes.push_back({d1, d2, 1.0 - d1 - d2});
          rule.weights.push_back(w);
        }
      }
    }
  }
  return rule;
}

SimplexQuadratureRule simplex_rule_dirichlet(std::size_t m, std::size_t count,
                                             std::uint64_t seed) {
  if (m < 2 || count == 0) throw std::invalid_argument("invalid Dirichlet rule shape");
  Rng rng(seed);
  SimplexQuadratureRule rule;
  const double w = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec lambda(m);
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      lambda[j] = -std::log(u);  // Exp(1) draws normalize to Dirichlet(1,..,1)
      sum += lambda[j];
    }
    for (std::size_t j = 0; j < m; ++j) lambda[j] /= sum;
    rule.nodes.push_back(std::move(lambda));
    rule.weights.push_back(w);
  }
  return rule;
}

SimplexQuadratureRule make_simplex_rule(std::size_t m, std::size_t min_nodes) {
  if (m == 2) return simplex_rule_gauss_2d(min_nodes);
  if (m == 3) {
    std::size_t n = 1;
    while (n * n < min_nodes) ++n;
    return simplex_rule_centroid_3d(n);
  }
  return simplex_rule_dirichlet(m, min_nodes, 0);
}

std::vector<Vec> latin_hypercube(Rng& rng, std::size_t n, std::size_t dims) {
  std::vector<Vec> pts(n, Vec(dims, 0.0));
  std::vector<std::size_t> perm(n);
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.index(i)]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      pts[i][d] = (perm[i] + rng.uniform()) / static_cast<double>(n);
    }
  }
  return pts;
}

}  // namespace pacq
