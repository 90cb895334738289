#include "rmcs/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstring>
#include <vector>

// AVX2 variants.  Built with -mavx2 (no FMA: multiplies and adds stay
// separate so results match the scalar reference bit-for-bit) and with FP
// contraction disabled project-wide.  Lane l of each accumulator vector holds
// exactly the partial sum the scalar reference keeps in acc[l].

namespace rmcs::kernels {
namespace {

inline void add_lane(__m256d& acc, int lane, double v) {
  alignas(32) double tmp[4] = {0.0, 0.0, 0.0, 0.0};
  tmp[lane] = v;
  acc = _mm256_add_pd(acc, _mm256_load_pd(tmp));
}

inline double fold(__m256d acc) {
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  return (t[0] + t[2]) + (t[1] + t[3]);
}

PairMoments lag_pair_moments_avx2(const double* marks, const double* mask, long n, long lag,
                                  bool periodic) {
  PairMoments out;
  if (n <= 0 || lag < 0) return out;
  if (periodic) {
    lag %= n;
  } else if (lag >= n) {
    return out;
  }
  const long limit = periodic ? n : n - lag;

  __m256d v1 = _mm256_setzero_pd(), v2 = _mm256_setzero_pd(), v12 = _mm256_setzero_pd();
  __m256d v11 = _mm256_setzero_pd(), v22 = _mm256_setzero_pd(), vc = _mm256_setzero_pd();

  auto scalar_element = [&](long x) {
    long k = x + lag;
    if (k >= n) k -= n;
    const int lane = static_cast<int>(x & 3);
    const double m = mask[x] * mask[k];
    const double a = marks[x];
    const double b = marks[k];
    add_lane(v1, lane, a * m);
    add_lane(v2, lane, b * m);
    const double p = a * b;
    add_lane(v12, lane, p * m);
    const double qa = a * a;
    add_lane(v11, lane, qa * m);
    const double qb = b * b;
    add_lane(v22, lane, qb * m);
    add_lane(vc, lane, m);
  };
  auto vector_block = [&](long x, long koff) {
    const __m256d a = _mm256_loadu_pd(marks + x);
    const __m256d b = _mm256_loadu_pd(marks + koff);
    const __m256d m = _mm256_mul_pd(_mm256_loadu_pd(mask + x), _mm256_loadu_pd(mask + koff));
    v1 = _mm256_add_pd(v1, _mm256_mul_pd(a, m));
    v2 = _mm256_add_pd(v2, _mm256_mul_pd(b, m));
    const __m256d p = _mm256_mul_pd(a, b);
    v12 = _mm256_add_pd(v12, _mm256_mul_pd(p, m));
    const __m256d qa = _mm256_mul_pd(a, a);
    v11 = _mm256_add_pd(v11, _mm256_mul_pd(qa, m));
    const __m256d qb = _mm256_mul_pd(b, b);
    v22 = _mm256_add_pd(v22, _mm256_mul_pd(qb, m));
    vc = _mm256_add_pd(vc, m);
  };

  long x = 0;
  const long wrap_start = n - lag;  // first x whose partner wraps (periodic only)
  // Vector blocks with un-wrapped partners.
  while (x + 4 <= limit && x + 4 <= wrap_start) {
    vector_block(x, x + lag);
    x += 4;
  }
  // Elements in the block straddling the wrap boundary (or the tail).
  while (x < limit && (x < wrap_start || (x & 3) != 0)) {
    scalar_element(x);
    ++x;
  }
  // Vector blocks with wrapped partners (partner index x + lag - n, contiguous).
  while (x + 4 <= limit) {
    vector_block(x, x + lag - n);
    x += 4;
  }
  for (; x < limit; ++x) scalar_element(x);

  out.s1 = fold(v1);
  out.s2 = fold(v2);
  out.s12 = fold(v12);
  out.s11 = fold(v11);
  out.s22 = fold(v22);
  out.count = fold(vc);
  return out;
}

void window_max_avx2(const double* marks, const double* mask, long n, long w, bool periodic,
                     double* out_marks, double* out_mask) {
  if (n <= 0) return;
  if (w < 0) w = 0;
  if (w > n) w = n;
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
  const __m256d neg_inf = _mm256_set1_pd(-HUGE_VAL);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  long x = 0;
  for (; x + 4 <= n; x += 4) {
    __m256d m = _mm256_loadu_pd(pad.data() + x);
    for (long d = 1; d <= 2 * w; ++d) m = _mm256_max_pd(m, _mm256_loadu_pd(pad.data() + x + d));
    const __m256d is_member = _mm256_cmp_pd(m, neg_inf, _CMP_NEQ_OQ);
    _mm256_storeu_pd(out_marks + x, _mm256_blendv_pd(zero, m, is_member));
    _mm256_storeu_pd(out_mask + x, _mm256_blendv_pd(zero, one, is_member));
  }
  for (; x < n; ++x) {
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

double reduce_sum_avx2(const double* x, long n) {
  __m256d acc = _mm256_setzero_pd();
  long i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  for (; i < n; ++i) add_lane(acc, static_cast<int>(i & 3), x[i]);
  return fold(acc);
}

}  // namespace

namespace detail {
const KernelTable& avx2_kernel_table() {
  static const KernelTable table{lag_pair_moments_avx2, window_max_avx2, reduce_sum_avx2, "avx2"};
  return table;
}
}  // namespace detail

}  // namespace rmcs::kernels
