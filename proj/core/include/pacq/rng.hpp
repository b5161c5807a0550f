#ifndef PACQ_RNG_HPP
#define PACQ_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pacq/pareto_geometry.hpp"

namespace pacq {

/// Seed-deterministic generator. Conversions to uniform and normal variates
/// are implemented here (not via std distributions) so that streams are
/// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  /// Standard normal via Box-Muller, pairwise cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586477 * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mu, double s) { return mu + s * normal(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seeded latin-hypercube sample of n points in [0,1]^dims.
std::vector<Vec> latin_hypercube(Rng& rng, std::size_t n, std::size_t dims);

}  // namespace pacq

#endif
