#include "rmcs/special.hpp"

#include <cmath>
#include <stdexcept>

namespace rmcs {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kTwoPi = 6.2831853071795864769;
}  // namespace

double phi(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double erfcx_positive(double x) {
  if (x < 0.0) throw std::domain_error("erfcx_positive: x must be >= 0");
  if (x < 1.0) return std::exp(x * x) * std::erfc(x);
  // Laplace continued fraction sqrt(pi) e^{x^2} erfc(x) =
  //   1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + ...))))),
  // evaluated bottom-up.  60 levels is far past convergence for x >= 1.
  double cf = 0.0;
  for (int k = 60; k >= 1; --k) cf = (0.5 * k) / (x + cf);
  return 1.0 / ((x + cf) * 1.7724538509055160273);  // sqrt(pi)
}

double Psi(double t) {
  if (t <= 6.0) return 0.5 * std::erfc(t / kSqrt2);
  return phi(t) * std::sqrt(M_PI / 2.0) * erfcx_positive(t / kSqrt2);
}

double biv_density(double s, double t, double rho) {
  if (!(rho > -1.0 && rho < 1.0)) throw std::domain_error("biv_density: rho must lie in (-1,1)");
  const double q = 1.0 - rho * rho;
  return std::exp(-(s * s - 2.0 * rho * s * t + t * t) / (2.0 * q)) / (kTwoPi * std::sqrt(q));
}

double biv_density_equal(double t, double s) {
  if (!(s > -1.0 && s < 1.0)) throw std::domain_error("biv_density_equal: s must lie in (-1,1)");
  return std::exp(-t * t / (1.0 + s)) / (kTwoPi * std::sqrt(1.0 - s * s));
}

double arcsin_shifted(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("arcsin_shifted: rho must lie in [-1,1]");
  return 2.0 * std::asin(std::sqrt(0.5 * (1.0 + rho)));
}

double inverse_normal_cdf(double p) {
  // AS241 (Wichura 1988), PPND16: max |error| ~ 1e-16 relative.
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p must lie in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

}  // namespace rmcs
