#pragma once

namespace rmcs::examples {

// Closed forms for the 1-periodic triangle-marked segment model with segment
// length p in (2/3, 1] (used as the oracle for the empirical estimates).

// Mark covariance cov(r) on [0, 1); piecewise on [0, 1/2], even about 1/2.
double triangle_cov(double p, double r);

// int_0^1 cov(r) dr in closed form; negative for p in [2/3, 1), zero at p=1.
double triangle_cov_integral(double p);

// Lag-0 moments of the triangle mark given membership.
double triangle_mean_mark(double p);        // p/4
double triangle_second_moment(double p);    // p^2/12

// Joint-membership probability P(o, o+r in Xi) on [0, 1), even about 1/2.
double triangle_pair_probability(double p, double r);

}  // namespace rmcs::examples
