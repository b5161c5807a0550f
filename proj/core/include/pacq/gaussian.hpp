#ifndef PACQ_GAUSSIAN_HPP
#define PACQ_GAUSSIAN_HPP

namespace pacq {

/// Scalar Gaussian N(mean, std^2); std == 0 denotes a point mass and every
/// expected-improvement formula takes its analytic limit there.
struct Gaussian1D {
  double mean = 0.0;
  double std = 1.0;
};

/// Gaussian conditioned on [lower, upper]; the truncation mass must stay
/// above underflow.
struct TruncatedGaussian1D {
  Gaussian1D base;
  double lower;
  double upper;
};

double std_normal_cdf(double u);
double std_normal_pdf(double u);

/// P(a <= Z <= b) for a standard normal, stable in both tails.
double std_normal_mass(double a, double b);

/// E[(c - Y)_+] = (c - mu) Phi(u) + s phi(u), u = (c - mu)/s.
double ei_shortfall(double c, const Gaussian1D& g);

/// E[(Y - t)_+] = (mu - t) Phi(u) + s phi(u), u = (mu - t)/s.
double ei_exceed(double t, const Gaussian1D& g);

/// E[(Y - t)_+ | lower <= Y <= upper], closed-form truncated partial moment.
double truncated_ei_exceed(double t, const TruncatedGaussian1D& tg);

}  // namespace pacq

#endif
