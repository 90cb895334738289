#include "rmcs/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace rmcs {

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double target_abs_error) {
  if (a == b) return {0.0, 0.0};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  // boost terminates on relative error; feed it the absolute target scaled by
  // a crude magnitude guess, floored so it never demands more than ~1e-15.
  const double scale = std::max(1.0, std::fabs(b - a));
  const double rel_tol = std::max(target_abs_error / scale, 5e-16);
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, /*max_depth=*/15, rel_tol, &err);
  return {sign * v, err};
}

}  // namespace rmcs
