#pragma once

#include <string>
#include <vector>

#include "rmcs/extended.hpp"

namespace rmcs {

enum class CovFamily { kGaussian, kExponential, kCosine, kMatern, kConstantOne, kTabulated };

// Stationary isotropic correlation function R(r) on r >= 0 with the metadata
// the derivative formulas need: the value of R''(0+) as an extended real
// (finite for mean-square differentiable fields, -infinity otherwise, and 0
// exactly for the constant model R == 1).
class CovarianceModel {
 public:
  static CovarianceModel gaussian(double length_scale = 1.0);     // exp(-(r/l)^2)
  static CovarianceModel exponential(double length_scale = 1.0);  // exp(-r/l)
  static CovarianceModel cosine(double omega = 1.0);              // cos(omega r)
  // Matern with half-integer smoothness nu in {0.5, 1.5, 2.5} (closed forms).
  static CovarianceModel matern(double nu, double length_scale = 1.0);
  static CovarianceModel constant_one();
  // Piecewise-linear user table; r ascending from 0 with values[0] == 1.
  static CovarianceModel tabulated(std::vector<double> r, std::vector<double> values,
                                   ExtendedReal second_deriv);

  double operator()(double r) const;
  CovFamily family() const { return family_; }
  ExtendedReal second_deriv_at_zero() const { return second_deriv_; }
  bool is_constant_one() const { return family_ == CovFamily::kConstantOne; }
  double length_scale() const { return param_; }
  std::string describe() const;

 private:
  CovarianceModel(CovFamily family, double param, double nu, ExtendedReal second_deriv)
      : family_(family), param_(param), nu_(nu), second_deriv_(second_deriv) {}

  CovFamily family_;
  double param_;  // length scale, or omega for cosine
  double nu_ = 0.0;
  ExtendedReal second_deriv_;
  std::vector<double> table_r_, table_v_;
};

struct ThresholdModel {
  double t;
  CovarianceModel covariance;
};

}  // namespace rmcs
