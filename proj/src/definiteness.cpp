#include "rmcs/definiteness.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rmcs::definiteness {
namespace {

// Rectangle-rule inner products I_n = int_0^P f cos(2 pi n r / P) dr for
// n = 0..n_max with N sample points (N even).
std::vector<double> rectangle_inner_products(const std::vector<double>& samples, double period,
                                             int n_max, int stride) {
  const size_t n = samples.size() / static_cast<size_t>(stride);
  std::vector<double> out(static_cast<size_t>(n_max) + 1, 0.0);
  for (int m = 0; m <= n_max; ++m) {
    double acc = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double r = static_cast<double>(j) / static_cast<double>(n);  // r / period
      acc += samples[j * static_cast<size_t>(stride)] * std::cos(2.0 * M_PI * m * r);
    }
    out[static_cast<size_t>(m)] = acc * period / static_cast<double>(n);
  }
  return out;
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

FourierResult fourier_coefficients(const std::function<double(double)>& f, double period,
                                   int n_max, int n_quad) {
  if (!(period > 0)) throw std::invalid_argument("fourier_coefficients: period must be > 0");
  if (n_max < 0) throw std::invalid_argument("fourier_coefficients: n_max must be >= 0");
  if (n_quad < 8 || n_quad % 2 != 0)
    throw std::invalid_argument("fourier_coefficients: n_quad must be even and >= 8");

  std::vector<double> samples(static_cast<size_t>(n_quad));
  for (int j = 0; j < n_quad; ++j) {
    const double r = period * static_cast<double>(j) / static_cast<double>(n_quad);
    const double v = f(r);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "fourier_coefficients: non-finite sample f(" << r << ") = " << v;
      throw std::domain_error(os.str());
    }
    samples[static_cast<size_t>(j)] = v;
  }

  FourierResult res;
  res.period = period;
  res.raw = rectangle_inner_products(samples, period, n_max, 1);
  const std::vector<double> coarse = rectangle_inner_products(samples, period, n_max, 2);
  res.quad_error = 0;
  for (size_t m = 0; m < res.raw.size(); ++m)
    res.quad_error = std::max(res.quad_error, std::abs(res.raw[m] - coarse[m]));
  res.a.resize(res.raw.size());
  for (size_t m = 0; m < res.raw.size(); ++m)
    res.a[m] = res.raw[m] * (m == 0 ? 1.0 : 2.0) / period;
  return res;
}

DefinitenessReport gram_pd_test(const std::function<double(double)>& f,
                                const std::vector<std::vector<double>>& points, double tol_rel) {
  if (points.size() < 2) throw std::invalid_argument("gram_pd_test: need >= 2 points");
  const long n = static_cast<long>(points.size());
  Eigen::MatrixXd M(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j <= i; ++j) {
      const double v = f(euclidean(points[static_cast<size_t>(i)], points[static_cast<size_t>(j)]));
      M(i, j) = v;
      M(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();

  DefinitenessReport rep;
  rep.method = "gram-matrix";
  rep.tolerance = tol_rel * std::max(hi, 1e-300);
  rep.witness_value = lo;
  std::ostringstream os;
  os << points.size() << " points, min eigenvalue " << lo << ", max |eigenvalue| " << hi;
  rep.detail = os.str();
  rep.verdict = (lo < -rep.tolerance) ? "not-pd" : "pd-consistent";
  return rep;
}

DefinitenessReport max_at_origin_test(const std::function<double(double)>& f,
                                      const std::vector<double>& r_grid, double tol_rel) {
  if (r_grid.empty()) throw std::invalid_argument("max_at_origin_test: empty grid");
  const double f0 = f(0.0);
  double scale = std::abs(f0);
  double worst_excess = -HUGE_VAL, worst_r = 0, worst_f = 0;
  for (double r : r_grid) {
    const double v = f(r);
    scale = std::max(scale, std::abs(v));
    const double excess = std::abs(v) - f0;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_r = r;
      worst_f = v;
    }
  }
  DefinitenessReport rep;
  rep.method = "max-at-origin";
  rep.tolerance = tol_rel * std::max(scale, 1e-300);
  rep.witness_location = worst_r;
  rep.witness_value = worst_excess;
  std::ostringstream os;
  os << "f(0) = " << f0 << ", worst point f(" << worst_r << ") = " << worst_f;
  rep.detail = os.str();
  rep.verdict = (worst_excess > rep.tolerance) ? "not-pd" : "pd-consistent";
  return rep;
}

DefinitenessReport cnd_test_via_exponential(const std::function<double(double)>& gamma,
                                            const std::vector<double>& s_values, PdMethod method,
                                            double period, int n_max,
                                            const std::vector<double>& gram_points,
                                            double tol_rel) {
  if (!std::isfinite(gamma(0.0)))
    throw std::invalid_argument("cnd_test_via_exponential: gamma(0) must be finite");
  if (s_values.empty())
    throw std::invalid_argument("cnd_test_via_exponential: need at least one s value");

  DefinitenessReport rep;
  for (double s : s_values) {
    if (!(s > 0)) throw std::invalid_argument("cnd_test_via_exponential: s values must be > 0");
    auto es = [&gamma, s](double r) { return std::exp(-s * gamma(r)); };
    if (method == PdMethod::kFourierPeriodic) {
      const FourierResult fr = fourier_coefficients(es, period, n_max);
      double scale = 0;
      for (double c : fr.a) scale = std::max(scale, std::abs(c));
      const double tol = tol_rel * std::max(scale, 1e-300);
      for (int m = 0; m <= n_max; ++m) {
        if (fr.a[static_cast<size_t>(m)] < -tol) {
          rep.method = "fourier-periodic";
          rep.verdict = "not-cnd";
          rep.witness_index = m;
          rep.witness_value = fr.a[static_cast<size_t>(m)];
          rep.tolerance = tol;
          std::ostringstream os;
          os << "exp(-s*gamma) with s = " << s << " has Fourier coefficient a_" << m << " = "
             << fr.a[static_cast<size_t>(m)] << " (raw inner product "
             << fr.raw[static_cast<size_t>(m)] << ")";
          rep.detail = os.str();
          return rep;
        }
      }
      rep.tolerance = tol;
    } else {
      std::vector<std::vector<double>> pts;
      if (gram_points.empty()) {
        for (int k = 0; k < 12; ++k) pts.push_back({0.35 * k});
      } else {
        for (double x : gram_points) pts.push_back({x});
      }
      DefinitenessReport sub = gram_pd_test(es, pts, tol_rel);
      if (sub.verdict == "not-pd") {
        sub.method = "gram-matrix";
        sub.verdict = "not-cnd";
        std::ostringstream os;
        os << "exp(-s*gamma) with s = " << s << ": " << sub.detail;
        sub.detail = os.str();
        return sub;
      }
      rep.tolerance = sub.tolerance;
    }
  }
  rep.method = (method == PdMethod::kFourierPeriodic) ? "fourier-periodic" : "gram-matrix";
  rep.verdict = "cnd-consistent";
  rep.detail = "no violation found at any tested s";
  return rep;
}

}  // namespace rmcs::definiteness
