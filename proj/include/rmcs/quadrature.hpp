#pragma once

#include <functional>

namespace rmcs {

struct QuadResult {
  double value;
  double abs_error;  // estimated
};

// Adaptive Gauss-Kronrod (15-point) integration of f over [a, b].
// Oriented: a > b gives the negated integral.  target_abs_error is a
// termination hint; the returned abs_error is the solver's estimate.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double target_abs_error = 1e-13);

}  // namespace rmcs
