#pragma once

#include <cstdint>
#include <string>

namespace rmcs::kernels {

// Inner loops of the estimator and the dilation operator, provided as scalar
// reference implementations plus an AVX2 variant selected at runtime.
//
// Bit-identical contract: every kernel accumulates into four partial sums by
// index residue (i mod 4) and folds them as (acc0 + acc2) + (acc1 + acc3);
// the scalar and SIMD variants perform the same multiplies and adds in the
// same order per lane, and the translation units are built without FP
// contraction, so the two variants return bitwise-identical doubles.  The
// equivalence is enforced by tests, not assumed.

struct PairMoments {
  double s1 = 0;     // sum of first-point marks over joint-member pairs
  double s2 = 0;     // sum of second-point marks
  double s12 = 0;    // sum of products
  double s11 = 0;    // sum of squared first-point marks
  double s22 = 0;    // sum of squared second-point marks
  double count = 0;  // number of joint-member pairs
};

// Ordered pairs (x, x+lag) for x in [0, n-lag) (minus-sampling) or x in
// [0, n) with wraparound (periodic).  mask holds 0.0/1.0; marks must be 0 at
// masked-out nodes.  lag must satisfy 0 <= lag < n.
using LagPairMomentsFn = PairMoments (*)(const double* marks, const double* mask, long n,
                                         long lag, bool periodic);

// Moving maximum over the window [x-w, x+w] (clamped at the edges unless
// periodic) of marks restricted to mask == 1; out_mask[x] = 1 if the window
// contains any member, out_marks[x] = that maximum (0 when out_mask[x] = 0).
using WindowMaxFn = void (*)(const double* marks, const double* mask, long n, long w,
                             bool periodic, double* out_marks, double* out_mask);

using ReduceSumFn = double (*)(const double* x, long n);

struct KernelTable {
  LagPairMomentsFn lag_pair_moments;
  WindowMaxFn window_max;
  ReduceSumFn reduce_sum;
  const char* name;
};

const KernelTable& scalar_kernels();
const KernelTable* avx2_kernels();   // nullptr when unsupported by build or CPU
const KernelTable& active_kernels();  // AVX2 when available; RMCS_KERNELS=scalar|avx2 overrides

}  // namespace rmcs::kernels
