#include "rmcs/monotonicity.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace rmcs::mono {
namespace {

BigFloat big_pi() { return boost::math::constants::pi<BigFloat>(); }

// c1, c2: coefficients of the square-root singularity of the lag covariance
// at rho = 1, i.e. f0(rho) = c1 sqrt(1-rho) + c2 (1-rho)^{3/2} + smooth.
BigFloat big_c1() {
  const BigFloat pi = big_pi();
  return -sqrt(BigFloat(2)) * (BigFloat(4) / (pi * pi) - BigFloat(1) / pi);
}
BigFloat big_c2() {
  const BigFloat pi = big_pi();
  return sqrt(BigFloat(2)) * (-BigFloat(1) / (4 * pi) + BigFloat(11) / (3 * pi * pi) +
                              BigFloat(2) / (pi * pi * pi) - BigFloat(16) / (pi * pi * pi * pi));
}

// Shared building blocks for f0/g0 as series in rho.
struct T0Blocks {
  PowerSeries<BigFloat> A;      // arcsin(rho) + pi/2
  PowerSeries<BigFloat> w;      // sqrt(1 - rho^2)
  PowerSeries<BigFloat> x;      // rho
  PowerSeries<BigFloat> sq;     // (pi/2) (1 + rho)^2
};

T0Blocks t0_blocks(int order) {
  const BigFloat pi = big_pi();
  PowerSeries<BigFloat> one_minus_x2(order);
  one_minus_x2[0] = 1;
  if (order >= 2) one_minus_x2[2] = -1;
  PowerSeries<BigFloat> onepx(order);
  onepx[0] = 1;
  if (order >= 1) onepx[1] = 1;
  T0Blocks b{series_arcsin_shifted(order), sqrt_series(one_minus_x2),
             PowerSeries<BigFloat>::identity(order), (pi / 2) * (onepx * onepx)};
  return b;
}

// Power-series tables for evaluating h'' = (f0 - g)'' near z = +1 / z = -1,
// where the direct closed form is numerically unusable.  Built once per
// order in high precision, cached as double tables.
struct CircleTables {
  std::vector<double> e;  // f0(1 - eta^2) = sum e_k eta^k   (eta = sqrt(1-z))
  std::vector<double> f;  // f0(-1 + zeta) = sum f_m zeta^m  (zeta = 1+z, analytic)
};

CircleTables build_circle_tables(int order) {
  const BigFloat pi = big_pi();
  const BigFloat sqrt2 = sqrt(BigFloat(2));

  // cn_k: arccos(1 - u) = sqrt(2 u) * sum_k cn_k u^k, cn_0 = 1,
  // cn_{k+1} = cn_k (2k+1)^2 / (4 (k+1) (2k+3)).
  std::vector<BigFloat> cn(static_cast<size_t>(order) + 1);
  cn[0] = 1;
  for (int k = 0; k + 1 <= order; ++k)
    cn[static_cast<size_t>(k) + 1] =
        cn[static_cast<size_t>(k)] * BigFloat((2 * k + 1) * (2 * k + 1)) /
        BigFloat(4 * (k + 1) * (2 * k + 3));

  CircleTables out;

  {  // Expansion about z = 1 in eta = sqrt(1-z):  z = 1 - eta^2.
    // A = pi - arccos(1 - eta^2) = pi - sqrt(2) * sum_k cn_k eta^{2k+1}.
    PowerSeries<BigFloat> A(order);
    A[0] = pi;
    for (int k = 0; 2 * k + 1 <= order; ++k) A[2 * k + 1] -= sqrt2 * cn[static_cast<size_t>(k)];
    PowerSeries<BigFloat> t(order);  // 1 + z = 2 - eta^2
    t[0] = 2;
    if (order >= 2) t[2] = -1;
    PowerSeries<BigFloat> w = shifted(sqrt_series(t), 1);  // eta * sqrt(2 - eta^2)
    PowerSeries<BigFloat> zpoly(order);                    // z = 1 - eta^2
    zpoly[0] = 1;
    if (order >= 2) zpoly[2] = -1;
    PowerSeries<BigFloat> f = zpoly + w / A - (pi / 2) * ((t * t) / (A * A));
    // Internal consistency: the odd singular coefficients must equal c1, c2.
    if (order >= 3) {
      if (abs(f[1] - big_c1()) > BigFloat("1e-35") || abs(f[3] - big_c2()) > BigFloat("1e-35"))
        throw std::logic_error("circle tables: eta-series disagrees with c1/c2");
    }
    out.e.reserve(f.coefficients().size());
    for (const auto& c : f.coefficients()) out.e.push_back(c.convert_to<double>());
  }

  {  // Expansion about z = -1 in zeta = 1+z (f0 is analytic there):
    // A = sqrt(2 zeta) K(zeta) with K = sum_k cn_k zeta^k, and
    // f0 = (-1 + zeta) + sqrt(2 - zeta) / (sqrt(2) K) - (pi/4) zeta / K^2.
    PowerSeries<BigFloat> K(order);
    for (int k = 0; k <= order; ++k) K[k] = cn[static_cast<size_t>(k)];
    PowerSeries<BigFloat> two_minus(order);
    two_minus[0] = 2;
    if (order >= 1) two_minus[1] = -1;
    PowerSeries<BigFloat> zpoly(order);  // z = -1 + zeta
    zpoly[0] = -1;
    if (order >= 1) zpoly[1] = 1;
    PowerSeries<BigFloat> f =
        zpoly + (BigFloat(1) / sqrt2) * (sqrt_series(two_minus) / K) -
        (pi / 4) * (shifted(PowerSeries<BigFloat>::constant(1, order), 1) / (K * K));
    out.f.reserve(f.coefficients().size());
    for (const auto& c : f.coefficients()) out.f.push_back(c.convert_to<double>());
  }
  return out;
}

const CircleTables& circle_tables(int order) {
  static std::map<int, CircleTables> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_circle_tables(order)).first;
  return it->second;
}

}  // namespace

PowerSeries<BigFloat> series_arcsin_shifted(int order) {
  PowerSeries<BigFloat> s(order);
  s[0] = big_pi() / 2;
  BigFloat u = 1;  // u_k = (2k)! / (4^k (k!)^2 (2k+1)), coefficient of rho^{2k+1}
  for (int k = 0; 2 * k + 1 <= order; ++k) {
    s[2 * k + 1] = u;
    u *= BigFloat((2 * k + 1) * (2 * k + 1)) / BigFloat((2 * k + 2) * (2 * k + 3));
  }
  return s;
}

PowerSeries<BigFloat> taylor_f0(int order) {
  T0Blocks b = t0_blocks(order);
  return b.x + b.w / b.A - b.sq / (b.A * b.A);
}

PowerSeries<BigFloat> taylor_g0(int order) {
  T0Blocks b = t0_blocks(order);
  PowerSeries<BigFloat> A2 = b.A * b.A;
  PowerSeries<BigFloat> num = b.x * A2 + b.w * b.A - b.sq;
  PowerSeries<BigFloat> den = A2 + b.x * (b.w * b.A) - b.sq;
  return num / den;
}

CrossoverBound crossover_bounds(int n) {
  if (n < 2) throw std::invalid_argument("crossover_bounds: n must be >= 2");
  const double pi = M_PI;
  CrossoverBound cb;
  cb.n = n;
  cb.a_lower = (4.0 - pi) / (pi * pi * std::sqrt(2.0 * pi)) * std::pow(n, -1.5);
  cb.b_upper = 0.182 / (static_cast<double>(n) * (n - 1));
  cb.holds = cb.a_lower > cb.b_upper;
  return cb;
}

PowerSeries<BigFloat> g_series_coeffs(int order) {
  // g(rho) = c1 (1-rho)^{1/2} + c2 (1-rho)^{3/2}; coefficient of rho^n in
  // (1-rho)^alpha obeys b_0 = 1, b_{n+1} = b_n (n - alpha)/(n + 1).
  const BigFloat c1 = big_c1(), c2 = big_c2();
  PowerSeries<BigFloat> out(order);
  BigFloat bh = 1, b3h = 1;  // alpha = 1/2 and alpha = 3/2 binomial terms
  for (int n = 0; n <= order; ++n) {
    out[n] = c1 * bh + c2 * b3h;
    bh *= (BigFloat(n) - BigFloat(1) / 2) / BigFloat(n + 1);
    b3h *= (BigFloat(n) - BigFloat(3) / 2) / BigFloat(n + 1);
  }
  return out;
}

std::complex<double> h_second_deriv_on_circle(double phi_angle, int series_order) {
  if (series_order < 10) throw std::invalid_argument("h_second_deriv_on_circle: order too small");
  using C = std::complex<double>;
  const double pi = M_PI;
  const double c1 = big_c1().convert_to<double>();
  const double c2 = big_c2().convert_to<double>();
  const C z = std::polar(1.0, phi_angle);

  if (std::abs(1.0 - z) < 0.5) {
    // h'' from the eta-series: the singular eta^1, eta^3 terms cancel against
    // g exactly; d^2/dz^2 eta^k = (k (k-2)/4) eta^{k-4}.
    const auto& tab = circle_tables(series_order);
    const C eta = std::sqrt(C(1.0) - z);
    C acc(0.0);
    for (int k = series_order; k >= 4; --k) {
      const double fac = 0.25 * k * (k - 2);
      acc = acc * eta + fac * tab.e[static_cast<size_t>(k)];
    }
    return acc;
  }

  // g''(z), regular away from z = 1.
  const C one_minus = C(1.0) - z;
  const C g2 = -(c1 / 4.0) * std::pow(one_minus, -1.5) + (3.0 * c2 / 4.0) * std::pow(one_minus, -0.5);

  if (std::abs(1.0 + z) < 0.5) {
    // f0 is analytic at z = -1: differentiate its zeta-series directly.
    const auto& tab = circle_tables(series_order);
    const C zeta = C(1.0) + z;
    C acc(0.0);
    for (int m = series_order; m >= 2; --m) {
      const double fac = static_cast<double>(m) * (m - 1);
      acc = acc * zeta + fac * tab.f[static_cast<size_t>(m)];
    }
    return acc - g2;
  }

  // Mid-circle: closed-form second derivative of f0 with principal branches.
  const C A = std::asin(z) + pi / 2.0;
  const C w = std::sqrt(C(1.0) - z * z);
  const C w2 = w * w, w3 = w2 * w, A2 = A * A, A3 = A2 * A, A4 = A3 * A;
  const C opz = C(1.0) + z;
  const C f2 = -1.0 / (w * A) - z * z / (w3 * A) + z / (w2 * A2) + 2.0 / (w * A3) - pi / A2 +
               4.0 * pi * opz / (A3 * w) - 3.0 * pi * (opz * opz) / (A4 * w2) +
               pi * z * (opz * opz) / (A3 * w3);
  return f2 - g2;
}

MonotonicityReport verify_absolute_monotonicity(const std::string& tag, int order) {
  if (order < 30)
    throw std::invalid_argument("verify_absolute_monotonicity: order must be >= 30");
  PowerSeries<BigFloat> series(0);
  if (tag == "f0") {
    series = taylor_f0(order);
  } else if (tag == "g0") {
    series = taylor_g0(order);
  } else {
    throw std::invalid_argument("verify_absolute_monotonicity: unknown tag '" + tag + "'");
  }

  MonotonicityReport rep;
  rep.tag = tag;
  rep.order = order;
  rep.direct_check_limit = 29;
  const BigFloat eps_num("1e-30");  // numerical slack, far below any true coefficient

  rep.coefficients.reserve(series.coefficients().size());
  BigFloat min_c = series[0];
  int min_idx = 0;
  for (int n = 0; n <= order; ++n) {
    rep.coefficients.push_back(series[n].convert_to<double>());
    if (series[n] < min_c) {
      min_c = series[n];
      min_idx = n;
    }
    if (series[n] < -eps_num) {
      std::ostringstream os;
      os << "absolute monotonicity violated: " << tag << " coefficient " << n << " = "
         << series[n].convert_to<double>();
      throw std::logic_error(os.str());
    }
  }
  rep.min_coefficient = min_c.convert_to<double>();
  rep.min_coefficient_index = min_idx;

  for (int n = 30; n <= order; ++n) {
    CrossoverBound cb = crossover_bounds(n);
    rep.bounds.push_back(cb);
    if (!cb.holds) {
      std::ostringstream os;
      os << "crossover predicate fails at n = " << n << " (a_lower = " << cb.a_lower
         << " <= b_upper = " << cb.b_upper << ")";
      throw std::logic_error(os.str());
    }
  }

  // Unit-circle scan backing the 0.182 tail bound via Cauchy estimates.
  const int kAngles = 720;
  double max_abs = -1.0, argmax = 0.0;
  for (int j = 0; j < kAngles; ++j) {
    const double phi = 2.0 * M_PI * j / kAngles;
    const double a = std::abs(h_second_deriv_on_circle(phi));
    if (a > max_abs) {
      max_abs = a;
      argmax = phi;
    }
  }
  rep.circle_max_abs_h2 = max_abs;
  rep.circle_argmax_angle = argmax;
  rep.h2_at_one = h_second_deriv_on_circle(0.0).real();
  if (!(max_abs < 0.182))
    throw std::logic_error("unit-circle scan exceeds the 0.182 tail budget");
  if (argmax != 0.0)
    throw std::logic_error("unit-circle scan maximum not attained at phi = 0");
  if (!(std::abs(rep.h2_at_one) < 0.08))
    throw std::logic_error("|h''(1)| not below 0.08");

  rep.verdict = "verified-to-order-" + std::to_string(order);
  return rep;
}

}  // namespace rmcs::mono
