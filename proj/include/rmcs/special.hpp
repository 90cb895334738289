#pragma once

namespace rmcs {

// Standard normal density phi(t) = exp(-t^2/2)/sqrt(2 pi).
double phi(double t);

// Upper tail Psi(t) = P(Z >= t) = 0.5 * erfc(t/sqrt(2)).
//
// For t > 6 the result is assembled as phi(t) * sqrt(pi/2) * erfcx(t/sqrt(2))
// with a continued-fraction erfcx, so the relative error stays ~1e-15 deep
// into the tail (plain erfc loses relative accuracy once the value underflows
// toward denormals).  Formulas downstream divide by Psi(t)^3, so relative
// accuracy matters.
double Psi(double t);

// Scaled complementary error function exp(x^2) * erfc(x) for x >= 0.
double erfcx_positive(double x);

// Bivariate standard normal density with correlation rho, rho in (-1,1).
// Throws std::domain_error outside the open interval.
double biv_density(double s, double t, double rho);

// Equal-argument bivariate density phi(t,t,s) = exp(-t^2/(1+s)) / (2 pi sqrt(1-s^2)).
double biv_density_equal(double t, double s);

// arcsin(rho) + pi/2 evaluated as 2*asin(sqrt((1+rho)/2)): exact at both
// endpoints and fully accurate relative to its (vanishing) value as rho -> -1,
// where the naive sum cancels.
double arcsin_shifted(double rho);

// Inverse standard normal CDF (Wichura's AS241, double precision).
// Domain (0,1); used to turn counter-based uniforms into normals.
double inverse_normal_cdf(double p);

}  // namespace rmcs
