#include "rmcs/kernels.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace rmcs::kernels {
namespace {

// Reference implementations.  The 4-lane blocked accumulation (index residue
// chooses the lane, fold order (0+2)+(1+3)) is part of the kernel contract:
// the AVX2 variant reproduces it exactly.

PairMoments lag_pair_moments_scalar(const double* marks, const double* mask, long n, long lag,
                                    bool periodic) {
  PairMoments out;
  if (n <= 0 || lag < 0) return out;
  if (periodic) {
    lag %= n;
  } else if (lag >= n) {
    return out;
  }
  const long limit = periodic ? n : n - lag;

  double a1[4] = {0, 0, 0, 0}, a2[4] = {0, 0, 0, 0}, a12[4] = {0, 0, 0, 0};
  double a11[4] = {0, 0, 0, 0}, a22[4] = {0, 0, 0, 0}, ac[4] = {0, 0, 0, 0};
  for (long x = 0; x < limit; ++x) {
    long k = x + lag;
    if (k >= n) k -= n;
    const int lane = static_cast<int>(x & 3);
    const double m = mask[x] * mask[k];
    const double a = marks[x];
    const double b = marks[k];
    a1[lane] += a * m;
    a2[lane] += b * m;
    const double p = a * b;
    a12[lane] += p * m;
    const double qa = a * a;
    a11[lane] += qa * m;
    const double qb = b * b;
    a22[lane] += qb * m;
    ac[lane] += m;
  }
  out.s1 = (a1[0] + a1[2]) + (a1[1] + a1[3]);
  out.s2 = (a2[0] + a2[2]) + (a2[1] + a2[3]);
  out.s12 = (a12[0] + a12[2]) + (a12[1] + a12[3]);
  out.s11 = (a11[0] + a11[2]) + (a11[1] + a11[3]);
  out.s22 = (a22[0] + a22[2]) + (a22[1] + a22[3]);
  out.count = (ac[0] + ac[2]) + (ac[1] + ac[3]);
  return out;
}

void window_max_scalar(const double* marks, const double* mask, long n, long w, bool periodic,
                       double* out_marks, double* out_mask) {
  if (n <= 0) return;
  if (w < 0) w = 0;
  if (w > n) w = n;
  // Padded masked buffer: pad[i] corresponds to node i - w; -inf marks both
  // non-members and (in the clamped case) out-of-range positions, so a single
  // max sweep handles edge correction for free.
  const long pn = n + 2 * w;
  std::vector<double> pad(static_cast<size_t>(pn));
  for (long i = 0; i < pn; ++i) {
    long j = i - w;
    if (periodic) {
      j %= n;
      if (j < 0) j += n;
      pad[static_cast<size_t>(i)] = mask[j] > 0.0 ? marks[j] : -HUGE_VAL;
    } else {
      pad[static_cast<size_t>(i)] =
          (j >= 0 && j < n && mask[j] > 0.0) ? marks[j] : -HUGE_VAL;
    }
  }
  for (long x = 0; x < n; ++x) {
    double m = pad[static_cast<size_t>(x)];
    for (long d = 1; d <= 2 * w; ++d) m = std::max(m, pad[static_cast<size_t>(x + d)]);
    if (m == -HUGE_VAL) {
      out_marks[x] = 0.0;
      out_mask[x] = 0.0;
    } else {
      out_marks[x] = m;
      out_mask[x] = 1.0;
    }
  }
}

double reduce_sum_scalar(const double* x, long n) {
  double acc[4] = {0, 0, 0, 0};
  for (long i = 0; i < n; ++i) acc[i & 3] += x[i];
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{lag_pair_moments_scalar, window_max_scalar, reduce_sum_scalar,
                                 "scalar"};
  return table;
}

}  // namespace rmcs::kernels
