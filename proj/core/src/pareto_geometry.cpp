#include "pacq/pareto_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace pacq {

namespace {

void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
}

// Clips points to the reference box from above (minimization) and drops
// nothing; returns the number of points that needed clipping.
std::size_t clip_to_reference(std::vector<Vec>& pts, const Vec& r) {
  std::size_t clipped = 0;
  for (auto& p : pts) {
    require_same_dim(p, r);
    bool touched = false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > r[j]) {
        p[j] = r[j];
        touched = true;
      }
    }
    if (touched) ++clipped;
  }
  return clipped;
}

std::vector<Vec> to_minimization(const ApproximationSet& A) {
  if (A.orientation == Orientation::minimize) return A.points;
  std::vector<Vec> out;
  out.reserve(A.points.size());
  for (const auto& p : A.points) out.push_back(negated(p));
  return out;
}

}  // namespace

Vec negated(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

double Box::volume() const {
  double vol = 1.0;
  for (std::size_t j = 0; j < lower.size(); ++j) {
    const double side = upper[j] - lower[j];
    if (side <= 0.0) return 0.0;
    vol *= side;
  }
  return vol;
}

bool dominates(const Vec& a, const Vec& b, Orientation o) {
  require_same_dim(a, b);
  const double sgn = (o == Orientation::minimize) ? 1.0 : -1.0;
  bool strict = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double da = sgn * a[j];
    const double db = sgn * b[j];
    if (da > db) return false;
    if (da < db) strict = true;
  }
  return strict;
}

namespace {

// O(n log n) dominated-point marking for m == 2.
std::vector<char> dominated_flags_2d(const std::vector<Vec>& pts, Orientation o) {
  const double sgn = (o == Orientation::minimize) ? 1.0 : -1.0;
  const std::size_t n = pts.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto key = [&](std::size_t i) {
    return std::make_tuple(sgn * pts[i][0], sgn * pts[i][1], i);
  };
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  std::vector<char> dominated(n, 0);
  double prefix_min_f2 = std::numeric_limits<double>::infinity();
  std::size_t g = 0;
  while (g < n) {
    std::size_t e = g;
    const double f1 = sgn * pts[idx[g]][0];
    while (e < n && sgn * pts[idx[e]][0] == f1) ++e;
    // Within an equal-f1 group, entries are sorted by (f2, original index).
    double group_min_f2 = std::numeric_limits<double>::infinity();
    double prev_f2 = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = g; k < e; ++k) {
      const std::size_t i = idx[k];
      const double f2 = sgn * pts[i][1];
      if (prefix_min_f2 <= f2) {
        dominated[i] = 1;  // some point with strictly smaller f1 and f2 <= ours
      } else if (k > g && (group_min_f2 < f2 || prev_f2 == f2)) {
        dominated[i] = 1;  // same f1, smaller f2 exists, or exact duplicate
      }
      group_min_f2 = std::min(group_min_f2, f2);
      prev_f2 = f2;
    }
    prefix_min_f2 = std::min(prefix_min_f2, group_min_f2);
    g = e;
  }
  return dominated;
}

}  // namespace

ApproximationSet pareto_filter(const ApproximationSet& A) {
  const auto& pts = A.points;
  const std::size_t n = pts.size();
  ApproximationSet out;
  out.orientation = A.orientation;
  if (n == 0) return out;

  std::vector<char> dominated(n, 0);
  if (pts.front().size() == 2) {
    dominated = dominated_flags_2d(pts, A.orientation);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n && !dominated[i]; ++j) {
        if (j == i) continue;
        if (dominates(pts[j], pts[i], A.orientation)) dominated[i] = 1;
        else if (pts[j] == pts[i] && j < i) dominated[i] = 1;  // duplicate collapse
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!dominated[i]) out.points.push_back(pts[i]);
  }
  return out;
}

DominatedRegionDecomposition decompose_dominated_region(const ApproximationSet& A,
                                                        const Vec& r) {
  DominatedRegionDecomposition dec;
  if (A.empty()) return dec;

  ApproximationSet work;
  work.points = to_minimization(A);
  const Vec rr = (A.orientation == Orientation::minimize) ? r : negated(r);
  dec.clipped_points = clip_to_reference(work.points, rr);
  work = pareto_filter(work);
  const auto& pts = work.points;
  const std::size_t m = rr.size();

  if (m == 1) {
    double lo = pts.front()[0];
    for (const auto& p : pts) lo = std::min(lo, p[0]);
    dec.boxes.push_back(Box{{lo}, {rr[0]}});
    return dec;
  }

  if (m == 2) {
    // Sorted sweep: ascending f1 gives descending f2 on the filtered front.
    std::vector<Vec> sorted = pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
    double upper_f2 = rr[1];
    for (const auto& p : sorted) {
      dec.boxes.push_back(Box{{p[0], p[1]}, {rr[0], upper_f2}});
      upper_f2 = p[1];
    }
    return dec;
  }

  if (pts.size() > 20) {
    throw std::length_error(
        "inclusion-exclusion decomposition is capped at |A| <= 20 for m >= 3");
  }
  const std::uint32_t full = (1u << pts.size()) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    Vec corner(m, -std::numeric_limits<double>::infinity());
    int bits = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (mask & (1u << i)) {
        ++bits;
        for (std::size_t j = 0; j < m; ++j) corner[j] = std::max(corner[j], pts[i][j]);
      }
    }
    dec.terms.push_back(SignedBox{Box{corner, rr}, (bits % 2 == 1) ? 1 : -1});
  }
  return dec;
}

double DominatedRegionDecomposition::volume() const {
  double vol = 0.0;
  for (const auto& b : boxes) vol += b.volume();
  for (const auto& t : terms) vol += t.sign * t.box.volume();
  return vol;
}

double hypervolume(const ApproximationSet& A, const Vec& r) {
  if (A.empty()) return 0.0;
  return decompose_dominated_region(A, r).volume();
}

double hvi(const Vec& y, const ApproximationSet& A, const Vec& r) {
  ApproximationSet with = A;
  with.points.push_back(y);
  const double gain = hypervolume(with, r) - hypervolume(A, r);
  return std::max(gain, 0.0);
}

namespace {

// Gauss-Jordan inverse with partial pivoting; also returns |det|.
std::vector<Vec> invert_matrix(std::vector<Vec> M, double* abs_det) {
  const std::size_t m = M.size();
  std::vector<Vec> inv(m, Vec(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) inv[i][i] = 1.0;
  double det = 1.0;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t row = col + 1; row < m; ++row) {
      if (std::abs(M[row][col]) > std::abs(M[piv][col])) piv = row;
    }
    if (std::abs(M[piv][col]) < 1e-14) {
      throw std::invalid_argument("singular cone generator matrix");
    }
    if (piv != col) {
      std::swap(M[piv], M[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    det *= M[col][col];
    const double scale = 1.0 / M[col][col];
    for (std::size_t j = 0; j < m; ++j) {
      M[col][j] *= scale;
      inv[col][j] *= scale;
    }
    for (std::size_t row = 0; row < m; ++row) {
      if (row == col) continue;
      const double f = M[row][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        M[row][j] -= f * M[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  *abs_det = std::abs(det);
  return inv;
}

Vec mat_vec(const std::vector<Vec>& M, const Vec& y) {
  Vec out(M.size(), 0.0);
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) out[i] += M[i][j] * y[j];
  }
  return out;
}

}  // namespace

SimplicialCone SimplicialCone::from_generators(const std::vector<Vec>& C) {
  SimplicialCone cone;
  cone.generators = C;
  cone.inverse = invert_matrix(C, &cone.abs_determinant);
  return cone;
}

SimplicialCone SimplicialCone::identity(std::size_t m) {
  std::vector<Vec> C(m, Vec(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) C[i][i] = 1.0;
  return from_generators(C);
}

Vec SimplicialCone::apply_inverse(const Vec& y) const { return mat_vec(inverse, y); }
Vec SimplicialCone::apply(const Vec& y) const { return mat_vec(generators, y); }

bool SimplicialCone::inverse_is_scaled_permutation(double tol) const {
  const std::size_t m = inverse.size();
  std::vector<char> col_used(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t nonzero = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(inverse[i][j]) > tol) {
        if (nonzero != m) return false;
        nonzero = j;
      }
    }
    if (nonzero == m || inverse[i][nonzero] <= 0.0 || col_used[nonzero]) return false;
    col_used[nonzero] = 1;
  }
  return true;
}

double cone_hypervolume(const ApproximationSet& A, const Vec& r,
                        const SimplicialCone& cone) {
  ApproximationSet transformed;
  transformed.orientation = Orientation::minimize;
  for (const auto& p : to_minimization(A)) {
    transformed.points.push_back(cone.apply_inverse(p));
  }
  const Vec rr = (A.orientation == Orientation::minimize) ? r : negated(r);
  return cone.abs_determinant * hypervolume(transformed, cone.apply_inverse(rr));
}

double PiecewiseLinearMap::operator()(double t) const {
  if (knots_x.size() < 2 || knots_x.size() != knots_y.size()) {
    throw std::invalid_argument("piecewise-linear map needs matching knots");
  }
  if (t < knots_x.front() - 1e-12 || t > knots_x.back() + 1e-12) {
    throw std::domain_error("desirability map undefined at queried value");
  }
  t = std::clamp(t, knots_x.front(), knots_x.back());
  auto it = std::upper_bound(knots_x.begin(), knots_x.end(), t);
  std::size_t hi = std::min<std::size_t>(it - knots_x.begin(), knots_x.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double dx = knots_x[hi] - knots_x[lo];
  if (dx <= 0.0) return knots_y[lo];
  const double w = (t - knots_x[lo]) / dx;
  return knots_y[lo] + w * (knots_y[hi] - knots_y[lo]);
}

Vec DesirabilityMap::apply(const Vec& y) const {
  if (y.size() != maps.size()) throw std::invalid_argument("dimension mismatch");
  Vec out(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) out[j] = maps[j](y[j]);
  return out;
}

DesirabilityMap DesirabilityMap::identity(std::size_t m, double lo, double hi) {
  DesirabilityMap d;
  d.maps.assign(m, PiecewiseLinearMap{{lo, hi}, {lo, hi}});
  return d;
}

double whv_product_density(const ApproximationSet& A, const Vec& r,
                           const DesirabilityMap& d) {
  ApproximationSet work;
  work.points = to_minimization(A);
  const Vec rr = (A.orientation == Orientation::minimize) ? r : negated(r);
  clip_to_reference(work.points, rr);
  ApproximationSet transformed;
  for (const auto& p : work.points) transformed.points.push_back(d.apply(p));
  return hypervolume(transformed, d.apply(rr));
}

bool kernel_admissible(const DesirabilityMap& d, const Vec& r) {
  if (d.maps.size() != r.size()) throw std::invalid_argument("dimension mismatch");
  for (std::size_t j = 0; j < d.maps.size(); ++j) {
    const auto& pl = d.maps[j];
    for (std::size_t i = 0; i + 1 < pl.knots_x.size(); ++i) {
      const double x0 = pl.knots_x[i];
      const double x1 = pl.knots_x[i + 1];
      if (x0 >= r[j]) break;          // piece lies above the reference interval
      if (x1 - x0 <= 0.0) continue;   // zero-length piece, measure zero
      const double slope = (pl.knots_y[i + 1] - pl.knots_y[i]) / (x1 - x0);
      if (slope <= 0.0) return false;
    }
  }
  return true;
}

double reduced_magnitude_box(double a, double b) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("negative side length");
  return 0.5 * (a + b) + 0.25 * a * b;
}

}  // namespace pacq
