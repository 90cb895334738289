#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <stdexcept>

#include "rmcs/gauss.hpp"
#include "rmcs/monotonicity.hpp"
#include "rmcs/series.hpp"

using namespace rmcs;

namespace {

PowerSeries<double> make(std::initializer_list<double> cs) {
  PowerSeries<double> s(static_cast<int>(cs.size()) - 1);
  int k = 0;
  for (double c : cs) s[k++] = c;
  return s;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("ring identities") {
  const auto a = make({1.0, 1.0, 0.0, 0.0, 0.0});   // 1 + x
  const auto b = make({1.0, -1.0, 0.0, 0.0, 0.0});  // 1 - x
  const auto prod = a * b;
  CHECK(prod[0] == 1.0);
  CHECK(prod[1] == 0.0);
  CHECK(prod[2] == -1.0);
  CHECK(prod[3] == 0.0);

  const auto geo = PowerSeries<double>::constant(1.0, 6) / make({1.0, -1.0, 0, 0, 0, 0, 0});
  for (int k = 0; k <= 6; ++k) CHECK(geo[k] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("division round trip and sqrt round trip") {
  const auto b = make({2.0, -0.7, 0.31, 0.05, -0.2, 0.11});
  const auto a = make({1.0, 0.4, -0.9, 0.2, 0.6, -0.05});
  const auto q = a / b;
  const auto back = q * b;
  for (int k = 0; k <= a.order(); ++k) CHECK(back[k] == doctest::Approx(a[k]).epsilon(1e-13));

  const auto s = sqrt_series(b);
  const auto sq = s * s;
  for (int k = 0; k <= b.order(); ++k)
    CHECK(sq[k] == doctest::Approx(b[k]).scale(1.0).epsilon(1e-13));
}

TEST_CASE("division and sqrt preconditions") {
  const auto zero_head = make({0.0, 1.0, 0.0});
  const auto one = PowerSeries<double>::constant(1.0, 2);
  CHECK_THROWS_AS(one / zero_head, std::domain_error);
  CHECK_THROWS_AS(sqrt_series(make({-1.0, 0.0})), std::domain_error);
  const auto short_series = PowerSeries<double>::constant(1.0, 1);
  CHECK_THROWS_AS(one + short_series, std::invalid_argument);
}

TEST_CASE("compose and shifted and eval") {
  // exp-like truncation composed with 2x: coefficients scale by 2^k.
  auto e = make({1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0});
  auto inner = make({0.0, 2.0, 0.0, 0.0, 0.0});
  auto comp = compose(e, inner);
  for (int k = 0; k <= 4; ++k)
    CHECK(comp[k] == doctest::Approx(e[k] * std::pow(2.0, k)).epsilon(1e-14));
  CHECK_THROWS_AS(compose(e, make({1.0, 2.0, 0, 0, 0})), std::domain_error);

  auto sh = shifted(make({3.0, 4.0, 5.0}), 1);
  CHECK(sh[0] == 0.0);
  CHECK(sh[1] == 3.0);
  CHECK(sh[2] == 4.0);

  CHECK(eval_series(make({1.0, 2.0, 3.0}), 0.5) == doctest::Approx(1.0 + 1.0 + 0.75));
}

TEST_CASE("arcsin series: rational coefficients") {
  const auto s = mono::series_arcsin_shifted(7);
  const BigFloat pi_half = boost::math::constants::pi<BigFloat>() / 2;
  CHECK(abs(s[0] - pi_half) < BigFloat("1e-45"));
  CHECK(abs(s[1] - 1) < BigFloat("1e-45"));
  CHECK(abs(s[2]) < BigFloat("1e-45"));
  CHECK(abs(s[3] - BigFloat(1) / 6) < BigFloat("1e-45"));
  CHECK(abs(s[5] - BigFloat(3) / 40) < BigFloat("1e-45"));
  CHECK(abs(s[7] - BigFloat(15) / 336) < BigFloat("1e-45"));
}

TEST_CASE("sqrt_series of 1 - x^2: binomial coefficients") {
  PowerSeries<BigFloat> a(8);
  a[0] = 1;
  a[2] = -1;
  const auto s = sqrt_series(a);
  CHECK(abs(s[0] - 1) < BigFloat("1e-45"));
  CHECK(abs(s[2] + BigFloat(1) / 2) < BigFloat("1e-45"));
  CHECK(abs(s[4] + BigFloat(1) / 8) < BigFloat("1e-45"));
  CHECK(abs(s[6] + BigFloat(1) / 16) < BigFloat("1e-45"));
  CHECK(abs(s[1]) + abs(s[3]) + abs(s[5]) < BigFloat("1e-45"));
}

TEST_CASE("taylor_f0: frozen leading coefficients") {
  const auto f0 = mono::taylor_f0(8);
  CHECK(std::abs(f0[0].convert_to<double>()) < 1e-30);
  CHECK(f0[1].convert_to<double>() == doctest::Approx(0.132045189834).epsilon(1e-11));
  CHECK(f0[2].convert_to<double>() == doctest::Approx(0.150184728795).epsilon(1e-11));
  CHECK(f0[3].convert_to<double>() == doctest::Approx(0.0254527876162).epsilon(1e-10));
}

TEST_CASE("taylor_g0: frozen leading coefficients") {
  const auto g0 = mono::taylor_g0(8);
  const BigFloat b1 = 1 - 2 / boost::math::constants::pi<BigFloat>();
  CHECK(std::abs(g0[0].convert_to<double>()) < 1e-30);
  CHECK(abs(g0[1] - b1) < BigFloat("1e-40"));
  CHECK(g0[2].convert_to<double>() == doctest::Approx(0.239349424574).epsilon(1e-11));
  CHECK(g0[3].convert_to<double>() == doctest::Approx(0.15027060444).epsilon(1e-10));
}

TEST_CASE("series evaluation reproduces the closed-form curves") {
  // Tail of the order-200 truncation at |rho| <= 0.9 is far below 1e-10.
  const auto f0 = mono::taylor_f0(200);
  const auto g0 = mono::taylor_g0(200);
  for (double rho : {0.1, 0.5, 0.9, -0.5}) {
    const gauss::TheoryT0 th = gauss::theory_t0(rho);
    const double f_val = eval_series(f0, BigFloat(rho)).convert_to<double>();
    const double g_val = eval_series(g0, BigFloat(rho)).convert_to<double>();
    CHECK(f_val == doctest::Approx(th.cov).scale(1.0).epsilon(1e-10));
    CHECK(g_val == doctest::Approx(th.cor).scale(1.0).epsilon(1e-10));
  }
}

}  // TEST_SUITE
