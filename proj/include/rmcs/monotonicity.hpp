#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rmcs/series.hpp"

namespace rmcs::mono {

// A(rho) = arcsin(rho) + pi/2 as a truncated power series in rho.
PowerSeries<BigFloat> series_arcsin_shifted(int order);

// Taylor coefficients (about 0) of the lag-covariance curve
//   f0(rho) = rho + sqrt(1-rho^2)/A - (pi/2)(1+rho)^2/A^2
// and of the lag-correlation curve
//   g0(rho) = [rho A^2 + sqrt(1-rho^2) A - (pi/2)(1+rho)^2]
//           / [    A^2 + rho sqrt(1-rho^2) A - (pi/2)(1+rho)^2].
PowerSeries<BigFloat> taylor_f0(int order);
PowerSeries<BigFloat> taylor_g0(int order);

// Closed-form tail bounds used beyond the directly checked orders:
//   a_lower(n) = (4-pi) / (pi^2 sqrt(2 pi)) * n^-{3/2}   (valid for n >= 6)
// underestimates the dominant part of the f0/g0 coefficient at order n, and
//   b_upper(n) = 0.182 / (n (n-1))                        (valid for n >= 2)
// overestimates the magnitude of the correction-series coefficient.  The
// "holds" predicate a_lower > b_upper proves nonnegativity at that order.
struct CrossoverBound {
  int n;
  double a_lower;
  double b_upper;
  bool holds;  // a_lower > b_upper
};
CrossoverBound crossover_bounds(int n);

// Coefficients a_n of the square-root part g(rho) = c1 sqrt(1-rho) + c2 (1-rho)^{3/2}
// expanded about rho = 0 (binomial series); dominates f0's tail.
PowerSeries<BigFloat> g_series_coeffs(int order);

// Second derivative h''(z) of the correction h = f0 - g on the unit circle,
// z = exp(i phi).  h extends holomorphically to the closed disk; the scan
// max |h''| < 0.182 on |z| = 1 certifies the b_upper(n) tail bound via the
// Cauchy estimates |b_n| <= max|h''| / (n (n-1)).
std::complex<double> h_second_deriv_on_circle(double phi_angle, int series_order = 44);

struct MonotonicityReport {
  std::string tag;                      // "f0" or "g0"
  int order;                            // N: highest order computed
  std::vector<double> coefficients;     // Taylor coefficients 0..N (rounded)
  double min_coefficient;
  int min_coefficient_index;
  int direct_check_limit;               // coefficients checked numerically up to here
  std::vector<CrossoverBound> bounds;   // analytic predicate for n in [30, N]
  double circle_max_abs_h2;             // scan of |h''| on the unit circle
  double circle_argmax_angle;
  double h2_at_one;                     // h''(1), the predicted maximiser
  std::string verdict;                  // "verified-to-order-N"
};

// Verifies nonnegativity of all Taylor coefficients of the tagged curve:
// orders 0..29 directly at high precision, orders 30..N via the crossover
// predicate, plus the unit-circle scan backing the tail bound.  Throws
// std::logic_error if any check fails (that would indicate a code bug),
// std::invalid_argument if N < 30 or the tag is unknown.
MonotonicityReport verify_absolute_monotonicity(const std::string& tag, int order);

}  // namespace rmcs::mono
