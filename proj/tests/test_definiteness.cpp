#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rmcs/definiteness.hpp"
#include "rmcs/gauss.hpp"

using namespace rmcs;
using namespace rmcs::definiteness;

namespace {
constexpr double kPi = 3.14159265358979323846;

double gamma_cos(double r) { return gauss::theory_t0(std::cos(r)).gamma; }
}  // namespace

TEST_SUITE("definiteness") {

TEST_CASE("fourier_coefficients: pure cosine and constant") {
  const auto fr = fourier_coefficients([](double r) { return std::cos(r); }, 2 * kPi, 4);
  CHECK(fr.a[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(fr.a[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fr.a[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(fr.raw[1] == doctest::Approx(kPi).epsilon(1e-12));

  const auto fc = fourier_coefficients([](double) { return 1.0; }, 3.0, 2);
  CHECK(fc.a[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fc.raw[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(fc.a[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(fc.quad_error < 1e-12);
}

TEST_CASE("fourier_coefficients: period scaling convention") {
  // f(r) = cos(2 pi r / P) on period P = 5 must give a_1 = 1 as well.
  const auto fr =
      fourier_coefficients([](double r) { return std::cos(2 * kPi * r / 5.0); }, 5.0, 3);
  CHECK(fr.a[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fr.raw[1] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("fourier_coefficients: input validation") {
  CHECK_THROWS_AS(fourier_coefficients([](double) { return 1.0; }, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(fourier_coefficients([](double) { return 1.0; }, 1.0, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(fourier_coefficients([](double) { return 1.0; }, 1.0, 2, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      fourier_coefficients([](double) { return std::nan(""); }, 1.0, 2), std::domain_error);
}

TEST_CASE("frozen first Fourier coefficient of exp(-gamma) under R = cos") {
  const auto fr = fourier_coefficients([](double r) { return std::exp(-gamma_cos(r)); },
                                       2 * kPi, 3);
  CHECK(fr.raw[1] == doctest::Approx(-0.0336409347544012636).scale(1.0).epsilon(1e-6));
  CHECK(fr.a[1] == doctest::Approx(-0.0107082421127897942).scale(1.0).epsilon(1e-6));
  CHECK(fr.raw[0] == doctest::Approx(5.26635002697849555).epsilon(1e-8));
}

TEST_CASE("gram_pd_test: closed-form 2x2 eigenvalues and verdicts") {
  auto f_ok = [](double r) { return r == 0.0 ? 1.0 : 0.3; };
  const auto ok = gram_pd_test(f_ok, {{0.0}, {1.0}});
  CHECK(ok.verdict == "pd-consistent");
  CHECK(ok.witness_value == doctest::Approx(0.7).epsilon(1e-12));  // min eigenvalue

  auto f_bad = [](double r) { return r == 0.0 ? 1.0 : 1.2; };
  const auto bad = gram_pd_test(f_bad, {{0.0}, {1.0}});
  CHECK(bad.verdict == "not-pd");
  CHECK(bad.witness_value == doctest::Approx(-0.2).scale(1.0).epsilon(1e-12));
}

TEST_CASE("gram_pd_test: rigid-motion invariance and gaussian kernel") {
  auto f = [](double r) { return std::exp(-r * r); };
  std::vector<std::vector<double>> pts, shifted;
  for (int k = 0; k < 6; ++k) {
    pts.push_back({0.4 * k, 0.15 * k * k});
    shifted.push_back({0.4 * k + 7.0, 0.15 * k * k - 3.0});
  }
  const auto a = gram_pd_test(f, pts);
  const auto b = gram_pd_test(f, shifted);
  CHECK(a.verdict == "pd-consistent");
  CHECK(b.verdict == a.verdict);
  CHECK(b.witness_value == doctest::Approx(a.witness_value).epsilon(1e-9));
  CHECK_THROWS_AS(gram_pd_test(f, {{0.0}}), std::invalid_argument);
}

TEST_CASE("max_at_origin_test: kmm violates, cov does not") {
  std::vector<double> grid;
  for (int i = 1; i <= 200; ++i) grid.push_back(0.005 * i);

  const auto kmm = max_at_origin_test(
      [](double r) { return gauss::theory_t0(std::exp(-r)).kmm; }, grid);
  CHECK(kmm.verdict == "not-pd");
  // Witness where R(r*) > (pi^2-1)/(pi^2+1): kmm exceeds its origin value on
  // a whole right-neighbourhood of 0.
  CHECK(std::exp(-kmm.witness_location) > (kPi * kPi - 1) / (kPi * kPi + 1));
  CHECK(kmm.witness_value > 0.0);

  const auto cov = max_at_origin_test(
      [](double r) { return gauss::theory_t0(std::exp(-r)).cov; }, grid);
  CHECK(cov.verdict == "pd-consistent");

  // |cos| <= cos(0): flat maximum elsewhere is not a violation.
  std::vector<double> wide;
  for (int i = 1; i <= 100; ++i) wide.push_back(0.05 * i);
  CHECK(max_at_origin_test([](double r) { return std::cos(r); }, wide).verdict ==
        "pd-consistent");
}

TEST_CASE("max_at_origin_test: witness is reproducible") {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.01 * i);
  auto f = [](double r) { return gauss::theory_t0(std::exp(-r)).kmm; };
  const auto a = max_at_origin_test(f, grid);
  const auto b = max_at_origin_test(f, grid);
  CHECK(a.witness_location == b.witness_location);
  CHECK(a.witness_value == b.witness_value);
}

TEST_CASE("cnd_test_via_exponential: verdicts for known cases") {
  // gamma(r) = r^2 is CND (Schoenberg: exp(-s r^2) is PD for all s > 0).
  const auto brown = cnd_test_via_exponential([](double r) { return r * r; }, {0.5, 1.0, 2.0},
                                              PdMethod::kGramMatrix);
  CHECK(brown.verdict == "cnd-consistent");

  // The zero-threshold mark variogram under R = cos is not CND: the first
  // Fourier coefficient of exp(-gamma) is negative.
  const auto marks = cnd_test_via_exponential(gamma_cos, {1.0}, PdMethod::kFourierPeriodic,
                                              2 * kPi, 6);
  CHECK(marks.verdict == "not-cnd");
  CHECK(marks.witness_index == 1);
  CHECK(marks.witness_value < 0.0);

  CHECK_THROWS_AS(cnd_test_via_exponential([](double r) { return r; }, {-1.0},
                                           PdMethod::kGramMatrix),
                  std::invalid_argument);
}

}  // TEST_SUITE
