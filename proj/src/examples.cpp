#include "rmcs/examples.hpp"

#include <cmath>
#include <stdexcept>

namespace rmcs::examples {
namespace {

void check_p(double p) {
  if (!(p > 2.0 / 3.0 && p <= 1.0))
    throw std::invalid_argument("triangle model: p must lie in (2/3, 1]");
}

}  // namespace

double triangle_cov(double p, double r) {
  check_p(p);
  r = r - std::floor(r);          // 1-periodic
  if (r > 0.5) r = 1.0 - r;       // even about 1/2
  const double r2 = r * r, r3 = r2 * r, r4 = r3 * r;
  const double p2 = p * p, p3 = p2 * p, p4 = p3 * p;
  if (r < 1.0 - p) {
    const double d = p - r;
    return (p4 - 4 * p3 * r - 12 * p2 * r2 + 48 * p * r3 - 36 * r4) / (48 * d * d);
  }
  const double q = 2 * p - 1;
  if (r < p / 2.0) {
    const double num = -3 * p4 - 24 * p3 * r + 12 * p3 - 48 * p2 * r2 + 48 * p2 * r - 12 * p2 +
                       64 * p * r3 + 48 * p * r2 - 48 * p * r + 8 * p - 32 * r3 - 24 * r2 +
                       24 * r - 4;
    return num / (48 * q * q);
  }
  const double num = 4 * p4 - 8 * p3 + 6 * p2 - 2 * p + 12 * r4 - 24 * r3 + 18 * r2 - 6 * r + 1;
  return -num / (12 * q * q);
}

double triangle_cov_integral(double p) {
  check_p(p);
  if (p == 1.0) return 0.0;
  const double p2 = p * p, p3 = p2 * p, p4 = p3 * p, p5 = p4 * p;
  const double q = 2 * p - 1;
  return (7.0 / 6.0) * p3 * std::log(p / q) +
         (409 * p5 - 790 * p4 + 565 * p3 - 280 * p2 + 120 * p - 24) / (120 * q * q);
}

double triangle_mean_mark(double p) {
  check_p(p);
  return p / 4.0;
}

double triangle_second_moment(double p) {
  check_p(p);
  return p * p / 12.0;
}

double triangle_pair_probability(double p, double r) {
  check_p(p);
  r = r - std::floor(r);
  return std::max(0.0, p - r) + std::max(0.0, p + r - 1.0);
}

}  // namespace rmcs::examples
