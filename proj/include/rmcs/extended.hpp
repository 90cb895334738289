#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmcs {

// Tagged extended real: either a finite value or -infinity.  Derivative
// formulas for non-mean-square-differentiable fields legitimately return
// -infinity, and we want that case explicit rather than smuggled through
// IEEE infinities produced by overflow.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal::finite: value not finite");
    return ExtendedReal(v, false);
  }
  static ExtendedReal neg_infinity() { return ExtendedReal(0.0, true); }

  bool is_finite() const { return !neg_inf_; }
  bool is_neg_infinity() const { return neg_inf_; }

  // Throws if -infinity; use is_finite() first.
  double value() const {
    if (neg_inf_) throw std::logic_error("ExtendedReal: value() on -infinity");
    return value_;
  }

  // IEEE view: -inf maps to -HUGE_VAL.  Convenient for printing/CSV.
  double as_double() const {
    return neg_inf_ ? -std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ == b.neg_inf_;
    return a.value_ == b.value_;
  }

 private:
  ExtendedReal(double v, bool neg_inf) : value_(v), neg_inf_(neg_inf) {}
  double value_;
  bool neg_inf_;
};

}  // namespace rmcs
