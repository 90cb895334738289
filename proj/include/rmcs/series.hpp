#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <stdexcept>
#include <vector>

namespace rmcs {

// Default high-precision coefficient type: ~166-bit mantissa, comfortably
// past the >= 80 bits the order-200 verification budget requires.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

// Truncated power series sum c_k x^k, k = 0..N.  All operations truncate at
// the common order N; binary operations require equal orders (mixing orders
// is a bug in this codebase, not a feature).
template <class T>
class PowerSeries {
 public:
  explicit PowerSeries(int order) : c_(static_cast<size_t>(order) + 1, T(0)) {
    if (order < 0) throw std::invalid_argument("PowerSeries: order must be >= 0");
  }
  static PowerSeries constant(const T& v, int order) {
    PowerSeries s(order);
    s.c_[0] = v;
    return s;
  }
  static PowerSeries identity(int order) {  // the series "x"
    PowerSeries s(order);
    if (order >= 1) s.c_[1] = T(1);
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_.at(static_cast<size_t>(k)); }
  T& operator[](int k) { return c_.at(static_cast<size_t>(k)); }
  const std::vector<T>& coefficients() const { return c_; }

  PowerSeries operator-() const {
    PowerSeries out(order());
    for (size_t k = 0; k < c_.size(); ++k) out.c_[k] = -c_[k];
    return out;
  }

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    PowerSeries out(a.order());
    for (size_t k = 0; k < a.c_.size(); ++k) out.c_[k] = a.c_[k] + b.c_[k];
    return out;
  }
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    PowerSeries out(a.order());
    for (size_t k = 0; k < a.c_.size(); ++k) out.c_[k] = a.c_[k] - b.c_[k];
    return out;
  }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    PowerSeries out(a.order());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (size_t j = 0; i + j < a.c_.size(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
  }
  friend PowerSeries operator*(const T& s, const PowerSeries& a) {
    PowerSeries out(a.order());
    for (size_t k = 0; k < a.c_.size(); ++k) out.c_[k] = s * a.c_[k];
    return out;
  }

  // Long division; divisor must have nonzero constant term.
  friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
    check_same(a, b);
    if (b.c_[0] == T(0)) throw std::domain_error("PowerSeries: division needs c0 != 0");
    PowerSeries out(a.order());
    for (size_t n = 0; n < a.c_.size(); ++n) {
      T s = a.c_[n];
      for (size_t k = 0; k < n; ++k) s -= out.c_[k] * b.c_[n - k];
      out.c_[n] = s / b.c_[0];
    }
    return out;
  }

  std::vector<T> c_copy() const { return c_; }

 private:
  static void check_same(const PowerSeries& a, const PowerSeries& b) {
    if (a.order() != b.order()) throw std::invalid_argument("PowerSeries: order mismatch");
  }
  std::vector<T> c_;
};

// sqrt(a) with a[0] > 0: s0 = sqrt(a0); s_n = (a_n - sum_{0<k<n} s_k s_{n-k}) / (2 s0).
template <class T>
PowerSeries<T> sqrt_series(const PowerSeries<T>& a) {
  using std::sqrt;
  if (!(a[0] > T(0))) throw std::domain_error("sqrt_series: constant term must be > 0");
  PowerSeries<T> out(a.order());
  out[0] = sqrt(a[0]);
  for (int n = 1; n <= a.order(); ++n) {
    T s = a[n];
    for (int k = 1; k < n; ++k) s -= out[k] * out[n - k];
    out[n] = s / (T(2) * out[0]);
  }
  return out;
}

// Composition a(b(x)) with b having zero constant term (Horner over series).
template <class T>
PowerSeries<T> compose(const PowerSeries<T>& a, const PowerSeries<T>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("compose: order mismatch");
  if (b[0] != T(0)) throw std::domain_error("compose: inner series needs zero constant term");
  PowerSeries<T> out = PowerSeries<T>::constant(a[a.order()], a.order());
  for (int k = a.order() - 1; k >= 0; --k) {
    out = out * b;
    out[0] += a[k];
  }
  return out;
}

// Multiply by x^k (coefficients shifted up; overflow truncated).
template <class T>
PowerSeries<T> shifted(const PowerSeries<T>& a, int k) {
  if (k < 0) throw std::invalid_argument("shifted: k must be >= 0");
  PowerSeries<T> out(a.order());
  for (int n = 0; n + k <= a.order(); ++n) out[n + k] = a[n];
  return out;
}

// Horner evaluation of the truncated polynomial.
template <class T>
T eval_series(const PowerSeries<T>& a, const T& x) {
  T acc = a[a.order()];
  for (int k = a.order() - 1; k >= 0; --k) acc = acc * x + a[k];
  return acc;
}

}  // namespace rmcs
