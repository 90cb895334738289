#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rmcs/quadrature.hpp"
#include "rmcs/rng.hpp"
#include "rmcs/special.hpp"

namespace rmcs::oracles {

namespace {

double nested_integral(double t, double rho, const std::function<double(double, double)>& g) {
  if (std::abs(rho) > 0.95)
    throw std::invalid_argument("truncated_moments: |rho| must be <= 0.95");
  const double hi = std::max(t, 0.0) + 12.0;  // phi(12) ~ 2e-32: tail negligible at 1e-9
  auto outer = [&](double x) {
    return integrate([&](double y) { return g(x, y) * biv_density(x, y, rho); }, t, hi, 1e-12)
        .value;
  };
  return integrate(outer, t, hi, 1e-11).value;
}

}  // namespace

TruncatedMoments truncated_moments(double t, double rho) {
  TruncatedMoments m;
  m.P = nested_integral(t, rho, [](double, double) { return 1.0; });
  m.E = nested_integral(t, rho, [](double x, double) { return x; });
  m.C = nested_integral(t, rho, [](double x, double y) { return x * y; });
  m.V = nested_integral(t, rho, [](double x, double) { return x * x; });
  return m;
}

McCharacteristics mc_characteristics_t0(double rho, long pairs, std::uint64_t seed,
                                        int n_batches) {
  if (pairs < n_batches || n_batches < 2)
    throw std::invalid_argument("mc_characteristics_t0: need pairs >= n_batches >= 2");
  const RandomStream stream(seed, stream_id(StreamPurpose::kMonteCarlo, 0));
  const double root = std::sqrt(1.0 - rho * rho);

  struct Sums {
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    long n = 0;
    double marg_sum = 0;  // x over {x >= 0}: marginal mean-mark draws
    long marg_n = 0;
  };
  std::vector<Sums> batch(static_cast<size_t>(n_batches));

  long accepted = 0;
  std::uint64_t k = 0;
  while (accepted < pairs) {
    const double x = stream.normal(2 * k);
    const double y = rho * x + root * stream.normal(2 * k + 1);
    ++k;
    const long b = accepted * n_batches / pairs;  // batch by acceptance index
    if (x >= 0.0) {
      batch[static_cast<size_t>(b)].marg_sum += x;
      batch[static_cast<size_t>(b)].marg_n += 1;
    }
    if (x >= 0.0 && y >= 0.0) {
      Sums& s = batch[static_cast<size_t>(b)];
      s.sx += x;
      s.sy += y;
      s.sxy += x * y;
      s.sxx += x * x;
      s.syy += y * y;
      s.n += 1;
      ++accepted;
    }
  }

  auto finish = [&](const std::function<double(const Sums&)>& f) {
    double mean = 0;
    std::vector<double> vals;
    vals.reserve(static_cast<size_t>(n_batches));
    for (const auto& s : batch) {
      vals.push_back(f(s));
      mean += vals.back();
    }
    mean /= n_batches;
    double ss = 0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n_batches - 1));
    return McColumn{mean, sd / std::sqrt(static_cast<double>(n_batches))};
  };

  McCharacteristics out;
  out.raw_draws = static_cast<long>(k);
  out.E = finish([](const Sums& s) { return s.sx / s.n; });
  out.gamma = finish([](const Sums& s) {
    return 0.5 * (s.sxx / s.n + s.syy / s.n) - s.sxy / s.n;
  });
  out.cov = finish([](const Sums& s) {
    return s.sxy / s.n - (s.sx / s.n) * (s.sy / s.n);
  });
  out.cor = finish([](const Sums& s) {
    const double mx = s.sx / s.n, my = s.sy / s.n;
    const double c = s.sxy / s.n - mx * my;
    const double vx = s.sxx / s.n - mx * mx, vy = s.syy / s.n - my * my;
    return c / std::sqrt(vx * vy);
  });
  out.kmm = finish([](const Sums& s) {
    const double mbar = s.marg_sum / s.marg_n;
    return (s.sxy / s.n) / (mbar * mbar);
  });
  return out;
}

double richardson_deriv(const std::function<double(double)>& g, double h0) {
  const double g0 = g(0.0);
  auto D = [&](double h) { return (g(h) - g0) / h; };
  const double d0 = D(h0), d1 = D(h0 / 2), d2 = D(h0 / 4);
  const double r1a = 2 * d1 - d0, r1b = 2 * d2 - d1;
  return (4 * r1b - r1a) / 3;
}

}  // namespace rmcs::oracles
