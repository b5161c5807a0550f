#include "pacq/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace pacq {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double std_normal_cdf(double u) { return 0.5 * std::erfc(-u * kInvSqrt2); }

double std_normal_pdf(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

double std_normal_mass(double a, double b) {
  if (b <= a) return 0.0;
  // erfc keeps precision in whichever tail both endpoints fall into.
  if (a >= 0.0) {
    return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
  }
  if (b <= 0.0) {
    return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
  }
  return std_normal_cdf(b) - std_normal_cdf(a);
}

double ei_shortfall(double c, const Gaussian1D& g) {
  if (g.std < 0.0) throw std::invalid_argument("negative standard deviation");
  const double d = c - g.mean;
  if (g.std == 0.0) return d > 0.0 ? d : 0.0;
  const double u = d / g.std;
  const double v = d * std_normal_cdf(u) + g.std * std_normal_pdf(u);
  return v > 0.0 ? v : 0.0;
}

double ei_exceed(double t, const Gaussian1D& g) {
  return ei_shortfall(-t, Gaussian1D{-g.mean, g.std});
}

double truncated_ei_exceed(double t, const TruncatedGaussian1D& tg) {
  const double mu = tg.base.mean;
  const double s = tg.base.std;
  if (tg.lower >= tg.upper) throw std::invalid_argument("empty truncation interval");
  if (t >= tg.upper) return 0.0;
  if (s == 0.0) {
    if (mu < tg.lower || mu > tg.upper) {
      throw std::domain_error("truncation mass underflow (point mass outside box)");
    }
    return mu > t ? mu - t : 0.0;
  }
  const double alpha = (tg.lower - mu) / s;
  const double beta = (tg.upper - mu) / s;
  const double mass = std_normal_mass(alpha, beta);
  if (!(mass > 1e-300)) throw std::domain_error("truncation mass underflow");

  const double lo = t > tg.lower ? t : tg.lower;
  const double la = (lo - mu) / s;
  const double numer = (mu - t) * std_normal_mass(la, beta) +
                       s * (std_normal_pdf(la) - std_normal_pdf(beta));
  const double v = numer / mass;
  return v > 0.0 ? v : 0.0;
}

}  // namespace pacq
