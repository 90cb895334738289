#include "rmcs/gauss.hpp"

#include <cmath>
#include <limits>

#include "rmcs/quadrature.hpp"

namespace rmcs {
namespace gauss {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

void check_rho(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("rho must lie in [-1,1]");
}

// exp(-t^2/(1+sin u)), continuously extended by 0 (t != 0) or 1 (t == 0)
// where 1+sin u vanishes.
double tail_integrand(double t, double u) {
  const double d = 1.0 + std::sin(u);
  if (d <= 0.0) return t == 0.0 ? 1.0 : 0.0;
  return std::exp(-t * t / d);
}

// Psi(t sqrt((1-rho)/(1+rho))), continuously extended at rho = -1.
double psi_ratio_arg(double t, double rho) {
  if (t == 0.0) return 0.5;
  if (rho <= -1.0) return t > 0.0 ? 0.0 : 1.0;
  return Psi(t * std::sqrt((1.0 - rho) / (1.0 + rho)));
}

}  // namespace

double orthant_P(double t, double rho) {
  check_rho(rho);
  const double psi2 = Psi(t) * Psi(t);
  if (rho == 0.0) return psi2;
  const auto q = integrate([t](double u) { return tail_integrand(t, u); }, 0.0, std::asin(rho), 1e-13);
  return psi2 + q.value / kTwoPi;
}

double E_t(double t, double rho) {
  check_rho(rho);
  if (rho == -1.0) return 0.0;
  return phi(t) * (rho + 1.0) * psi_ratio_arg(t, rho);
}

double C_t(double t, double rho) {
  check_rho(rho);
  const double psi = Psi(t);
  double integral = 0.0;
  if (rho != 0.0) {
    const auto q = integrate(
        [t, rho](double u) { return (rho - std::sin(u) - t * t) * tail_integrand(t, u); }, 0.0,
        std::asin(rho), 1e-13);
    integral = q.value / kTwoPi;
  }
  const double bracket = (rho + 1.0) * psi_ratio_arg(t, rho) - psi;
  return integral + rho * psi * psi + phi(t) * phi(t) + 2.0 * t * phi(t) * bracket;
}

double integral_identity_lhs(double t, double rho) {
  if (!(rho > -1.0 && rho <= 1.0)) throw std::domain_error("rho must lie in (-1,1]");
  if (t == 0.0 || rho == 0.0) return 0.0;
  const auto q = integrate(
      [t](double u) {
        const double d = 1.0 + std::sin(u);
        if (d <= 0.0) return 0.0;
        return std::exp(-t * t / d) / d;
      },
      0.0, std::asin(rho), 1e-14);
  return t * q.value / kTwoPi;
}

double integral_identity_rhs(double t, double rho) {
  return phi(t) * (psi_ratio_arg(t, rho) - Psi(t));
}

double V_0(double rho) {
  check_rho(rho);
  return (rho * std::sqrt(std::max(0.0, 1.0 - rho * rho)) + arcsin_shifted(rho)) / kTwoPi;
}

TheoryT0 theory_t0(double rho) {
  check_rho(rho);
  if (rho == -1.0) {
    // Continuous limits; cor's numerator and denominator both vanish like
    // (1+rho)^2 and the ratio tends to (4/3 - pi/2)/(8/3 - pi/2).
    const double cor_limit = (4.0 / 3.0 - M_PI / 2.0) / (8.0 / 3.0 - M_PI / 2.0);
    return {0.0, 0.0, 0.0, 0.0, cor_limit};
  }
  const double A = arcsin_shifted(rho);
  const double w = std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho)));
  const double wa = w / A;  // stable: both vanish like sqrt(1+rho) as rho -> -1
  const double one_plus = 1.0 + rho;
  TheoryT0 out;
  out.E = std::sqrt(M_PI / 2.0) * one_plus / A;
  out.cov = rho + wa - (M_PI / 2.0) * (one_plus / A) * (one_plus / A);
  out.gamma = (1.0 - rho) * (1.0 - wa);
  out.kmm = (M_PI / 2.0) * (rho + wa);
  const double num = rho * A * A + w * A - (M_PI / 2.0) * one_plus * one_plus;
  const double den = A * A + rho * w * A - (M_PI / 2.0) * one_plus * one_plus;
  out.cor = num / den;
  return out;
}

double f_t(double t, double rho) {
  check_rho(rho);
  const double P = orthant_P(t, rho);
  // orthant_P forms P as Psi(t)^2 plus an integral that cancels it when rho is
  // near -1 and t is large, so values at or below the roundoff residue of that
  // cancellation carry no correct digits.  Refuse to divide by them.
  const double noise_floor =
      std::max(1e-300, 4096.0 * std::numeric_limits<double>::epsilon() * Psi(t) * Psi(t));
  if (!(P > noise_floor)) {
    throw DegenerateCaseError("f_t: joint exceedance probability underflows at t=" +
                              std::to_string(t) + ", rho=" + std::to_string(rho));
  }
  const double e = E_t(t, rho) / P;
  return C_t(t, rho) / P - e * e;
}

double cov_deriv_numerator(double t) {
  const double p = phi(t);
  const double q = Psi(t);
  return (t * t - 1.0) * q * q - 3.0 * t * p * q + 2.0 * p * p;
}

namespace {
double sqrt_neg_second_deriv(const ThresholdModel& model, bool* finite) {
  if (model.covariance.is_constant_one())
    throw std::invalid_argument("derivative formulas exclude the constant model R == 1");
  const ExtendedReal d2 = model.covariance.second_deriv_at_zero();
  if (d2.is_neg_infinity()) {
    *finite = false;
    return 0.0;
  }
  *finite = true;
  return std::sqrt(-d2.value());
}
}  // namespace

ExtendedReal cov_deriv_at_zero(const ThresholdModel& model) {
  bool finite = false;
  const double root = sqrt_neg_second_deriv(model, &finite);
  if (!finite) return ExtendedReal::neg_infinity();
  const double t = model.t;
  const double q = Psi(t);
  const double v = -cov_deriv_numerator(t) / (q * q * q) * phi(t) * root / std::sqrt(kTwoPi);
  return ExtendedReal::finite(v);
}

ExtendedReal set_cov_deriv_at_zero(const ThresholdModel& model) {
  bool finite = false;
  const double root = sqrt_neg_second_deriv(model, &finite);
  if (!finite) return ExtendedReal::neg_infinity();
  return ExtendedReal::finite(-phi(model.t) / std::sqrt(kTwoPi) * root);
}

}  // namespace gauss
}  // namespace rmcs
