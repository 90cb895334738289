#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rmcs::definiteness {

// Cosine-series coefficients of a P-periodic function, computed with the
// N-point rectangle rule (spectrally accurate for smooth periodic f).
//
// Convention (documented in docs/config.md): with omega_n = 2 pi n / P,
//   a_0 = (1/P) * I_0,   a_n = (2/P) * I_n   where I_n = int_0^P f(r) cos(omega_n r) dr,
// so that f(r) = cos(2 pi r / P) yields a = (0, 1, 0, ...).  The raw inner
// products I_n are reported alongside, since sign questions (positive
// definiteness via Bochner) only need the sign, which both share.
struct FourierResult {
  double period = 0;
  std::vector<double> a;    // normalized coefficients a_0..a_nmax
  std::vector<double> raw;  // raw inner products I_0..I_nmax
  double quad_error = 0;    // rectangle-rule error estimate (N vs N/2 comparison)
};
FourierResult fourier_coefficients(const std::function<double(double)>& f, double period,
                                   int n_max, int n_quad = 4096);

struct DefinitenessReport {
  std::string method;   // "fourier-periodic" | "gram-matrix" | "max-at-origin"
  std::string verdict;  // "pd-consistent" | "not-pd" | "cnd-consistent" | "not-cnd"
  // Witness of a violation (meaning depends on method):
  //   fourier-periodic: index = Fourier n, value = the negative coefficient
  //   gram-matrix:      value = minimum eigenvalue (relative scale in detail)
  //   max-at-origin:    location = r*, value = |f(r*)| - f(0) > 0
  int witness_index = -1;
  double witness_location = 0;
  double witness_value = 0;
  double tolerance = 0;  // the absolute tolerance the verdict was called against
  std::string detail;
};

// Minimum eigenvalue of the Gram matrix [f(||x_i - x_j||)]; not-pd when it
// drops below -tol_rel * max|eigenvalue|.  A necessary-condition test: the
// affirmative verdict is "pd-consistent", never a certification.
DefinitenessReport gram_pd_test(const std::function<double(double)>& f,
                                const std::vector<std::vector<double>>& points,
                                double tol_rel = 1e-8);

// Necessary PD condition |f(r)| <= f(0): scans the grid for a violating r*.
DefinitenessReport max_at_origin_test(const std::function<double(double)>& f,
                                      const std::vector<double>& r_grid, double tol_rel = 1e-8);

enum class PdMethod { kFourierPeriodic, kGramMatrix };

// gamma is conditionally negative definite iff exp(-s*gamma) is positive
// definite for every s > 0; any not-pd witness at some tested s => not-cnd.
// The Fourier method treats gamma as `period`-periodic; the Gram method
// evaluates on `gram_points` (1-D lags).
DefinitenessReport cnd_test_via_exponential(const std::function<double(double)>& gamma,
                                            const std::vector<double>& s_values, PdMethod method,
                                            double period = 2 * 3.14159265358979323846,
                                            int n_max = 8,
                                            const std::vector<double>& gram_points = {},
                                            double tol_rel = 1e-8);

}  // namespace rmcs::definiteness
