#pragma once

#include <stdexcept>
#include <vector>

#include "rmcs/covariance.hpp"
#include "rmcs/extended.hpp"
#include "rmcs/special.hpp"

namespace rmcs {

// Raised when a conditional quantity is evaluated where the conditioning
// probability underflows to zero (e.g. joint exceedance at correlation near -1
// with a large threshold).
struct DegenerateCaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CurveKind { kE, kCov, kGamma, kCor, kKmm, kSetCovariance };
enum class Provenance { kClosedForm, kQuadrature, kEmpirical };

struct SecondOrderCurve {
  CurveKind kind;
  Provenance provenance;
  std::vector<double> r_grid;   // strictly ascending, r >= 0
  std::vector<double> values;
  long replicates = 0;          // > 0 for empirical curves
};

namespace gauss {

// P_t(rho) = P(Z(o) >= t, Z(h) >= t) where rho is the field correlation at
// lag h.  Evaluated as Psi(t)^2 + (1/2pi) Int_0^{arcsin rho} exp(-t^2/(1+sin u)) du;
// the sine substitution removes the 1/sqrt(1-s^2) endpoint singularity, so the
// integrand is bounded and the quadrature is clean at rho = +-1.
// Absolute error <= 1e-10 (typically ~1e-14).
double orthant_P(double t, double rho);

// E_t(rho) = E[Z(o) 1{Z(o)>=t} 1{Z(h)>=t}] = phi(t)(rho+1) Psi(t sqrt((1-rho)/(1+rho))).
// At rho = -1 the continuous limit 0 is returned.
double E_t(double t, double rho);

// C_t(rho) = E[Z(o) Z(h) 1{Z(o)>=t} 1{Z(h)>=t}]
//          = Int_0^rho phi(t,t,s)(rho - s - t^2) ds + rho Psi(t)^2 + phi(t)^2
//            + 2 t phi(t) [ (rho+1) Psi(t sqrt((1-rho)/(1+rho))) - Psi(t) ].
// Absolute error <= 1e-9.
double C_t(double t, double rho);

// Quadrature side t * Int_0^rho phi(t,t,s)/(1+s) ds of the identity whose
// closed form is phi(t)[Psi(t sqrt((1-rho)/(1+rho))) - Psi(t)].
double integral_identity_lhs(double t, double rho);

// Closed form of the identity above (the RHS), for cross-checks.
double integral_identity_rhs(double t, double rho);

// V_0(rho) = E[Z(o)^2 1{Z(o)>=0} 1{Z(h)>=0}] = (rho sqrt(1-rho^2) + arcsin rho + pi/2)/(2 pi).
double V_0(double rho);

// All five second-order characteristics of the zero-threshold model in closed
// form, as functions of rho = R(r).
struct TheoryT0 {
  double E;
  double cov;    // = f0(rho)
  double gamma;
  double kmm;
  double cor;    // = g0(rho)
};
// At rho = -1 the continuous limits are returned
// (E = cov = gamma = kmm = 0, cor = (4/3 - pi/2)/(8/3 - pi/2)).
// Note: cor loses precision for rho within ~1e-7 of -1 (0/0 cancellation).
TheoryT0 theory_t0(double rho);

// Mark covariance f_t(rho) = C_t/P_t - (E_t/P_t)^2.
// Throws DegenerateCaseError when P_t(rho) underflows to zero.
double f_t(double t, double rho);

// Numerator (t^2-1) Psi(t)^2 - 3 t phi(t) Psi(t) + 2 phi(t)^2 of the
// cov'(0+) formula; positive for all real t.
double cov_deriv_numerator(double t);

// cov'(0+) for the threshold model: the closed form
//   -[(t^2-1)Psi^2 - 3 t phi Psi + 2 phi^2] / Psi^3 * phi sqrt(-R''(0+)) / sqrt(2 pi)
// when R is twice differentiable at 0, -infinity otherwise.
// Throws std::invalid_argument for the constant-one correlation (no decay at
// the origin, so there is nothing to differentiate).
ExtendedReal cov_deriv_at_zero(const ThresholdModel& model);

// Set-covariance derivative C'_{Xi_t}(0+) = -(phi(t)/sqrt(2 pi)) sqrt(-R''(0+)),
// -infinity when the field is not mean-square differentiable.
// Throws std::invalid_argument for R == 1.
ExtendedReal set_cov_deriv_at_zero(const ThresholdModel& model);

}  // namespace gauss
}  // namespace rmcs
