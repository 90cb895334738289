#include "rmcs/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmcs {

CovarianceModel CovarianceModel::gaussian(double length_scale) {
  if (!(length_scale > 0)) throw std::invalid_argument("gaussian: length_scale must be > 0");
  return CovarianceModel(CovFamily::kGaussian, length_scale, 0.0,
                         ExtendedReal::finite(-2.0 / (length_scale * length_scale)));
}

CovarianceModel CovarianceModel::exponential(double length_scale) {
  if (!(length_scale > 0)) throw std::invalid_argument("exponential: length_scale must be > 0");
  return CovarianceModel(CovFamily::kExponential, length_scale, 0.0, ExtendedReal::neg_infinity());
}

CovarianceModel CovarianceModel::cosine(double omega) {
  if (!(omega > 0)) throw std::invalid_argument("cosine: omega must be > 0");
  return CovarianceModel(CovFamily::kCosine, omega, 0.0, ExtendedReal::finite(-omega * omega));
}

CovarianceModel CovarianceModel::matern(double nu, double length_scale) {
  if (!(length_scale > 0)) throw std::invalid_argument("matern: length_scale must be > 0");
  ExtendedReal d2 = ExtendedReal::neg_infinity();
  if (nu == 1.5) d2 = ExtendedReal::finite(-3.0 / (length_scale * length_scale));
  if (nu == 2.5) d2 = ExtendedReal::finite(-5.0 / (3.0 * length_scale * length_scale));
  if (nu != 0.5 && nu != 1.5 && nu != 2.5)
    throw std::invalid_argument("matern: only nu in {0.5, 1.5, 2.5} supported");
  return CovarianceModel(CovFamily::kMatern, length_scale, nu, d2);
}

CovarianceModel CovarianceModel::constant_one() {
  return CovarianceModel(CovFamily::kConstantOne, 0.0, 0.0, ExtendedReal::finite(0.0));
}

CovarianceModel CovarianceModel::tabulated(std::vector<double> r, std::vector<double> values,
                                           ExtendedReal second_deriv) {
  if (r.size() < 2 || r.size() != values.size())
    throw std::invalid_argument("tabulated: need matching r/value arrays with >= 2 entries");
  if (r.front() != 0.0 || values.front() != 1.0)
    throw std::invalid_argument("tabulated: table must start at R(0) = 1");
  for (size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw std::invalid_argument("tabulated: r must be strictly ascending");
    if (std::fabs(values[i]) > 1.0 + 1e-12)
      throw std::invalid_argument("tabulated: |R| must be <= 1");
  }
  CovarianceModel m(CovFamily::kTabulated, 0.0, 0.0, second_deriv);
  m.table_r_ = std::move(r);
  m.table_v_ = std::move(values);
  return m;
}

double CovarianceModel::operator()(double r) const {
  r = std::fabs(r);
  switch (family_) {
    case CovFamily::kGaussian: {
      const double x = r / param_;
      return std::exp(-x * x);
    }
    case CovFamily::kExponential:
      return std::exp(-r / param_);
    case CovFamily::kCosine:
      return std::cos(param_ * r);
    case CovFamily::kMatern: {
      const double x = r / param_;
      if (nu_ == 0.5) return std::exp(-x);
      if (nu_ == 1.5) {
        const double a = std::sqrt(3.0) * x;
        return (1.0 + a) * std::exp(-a);
      }
      const double a = std::sqrt(5.0) * x;
      return (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
    case CovFamily::kConstantOne:
      return 1.0;
    case CovFamily::kTabulated: {
      if (r >= table_r_.back()) return table_v_.back();
      auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
      const size_t i = static_cast<size_t>(it - table_r_.begin());
      const double w = (r - table_r_[i - 1]) / (table_r_[i] - table_r_[i - 1]);
      return table_v_[i - 1] + w * (table_v_[i] - table_v_[i - 1]);
    }
  }
  throw std::logic_error("CovarianceModel: unknown family");
}

std::string CovarianceModel::describe() const {
  switch (family_) {
    case CovFamily::kGaussian: return "gaussian(l=" + std::to_string(param_) + ")";
    case CovFamily::kExponential: return "exponential(l=" + std::to_string(param_) + ")";
    case CovFamily::kCosine: return "cosine(omega=" + std::to_string(param_) + ")";
    case CovFamily::kMatern:
      return "matern(nu=" + std::to_string(nu_) + ",l=" + std::to_string(param_) + ")";
    case CovFamily::kConstantOne: return "constant-one";
    case CovFamily::kTabulated: return "tabulated(" + std::to_string(table_r_.size()) + " knots)";
  }
  return "unknown";
}

}  // namespace rmcs
