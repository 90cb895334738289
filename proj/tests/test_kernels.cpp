#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "rmcs/kernels.hpp"
#include "rmcs/rng.hpp"

using namespace rmcs;
using namespace rmcs::kernels;

namespace {

struct Data {
  std::vector<double> marks, mask;
};

Data make_marked_data(long n, uint64_t rep, double member_prob = 0.7) {
  const RandomStream s(424242ull, stream_id(StreamPurpose::kGeneric, rep));
  Data d;
  d.marks.resize(static_cast<size_t>(n));
  d.mask.resize(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    const bool member = s.uniform(2 * static_cast<uint64_t>(i)) < member_prob;
    d.mask[static_cast<size_t>(i)] = member ? 1.0 : 0.0;
    d.marks[static_cast<size_t>(i)] =
        member ? 2.0 * s.uniform(2 * static_cast<uint64_t>(i) + 1) - 0.5 : 0.0;
  }
  return d;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("lag_pair_moments: hand-computed case") {
  const std::vector<double> marks = {1.0, 2.0, 0.0, 4.0};
  const std::vector<double> mask = {1.0, 1.0, 0.0, 1.0};
  const auto& k = scalar_kernels();

  const PairMoments per = k.lag_pair_moments(marks.data(), mask.data(), 4, 1, true);
  CHECK(per.s1 == 5.0);   // pairs (0,1) and (3,0)
  CHECK(per.s2 == 3.0);
  CHECK(per.s12 == 6.0);
  CHECK(per.s11 == 17.0);
  CHECK(per.s22 == 5.0);
  CHECK(per.count == 2.0);

  const PairMoments line = k.lag_pair_moments(marks.data(), mask.data(), 4, 1, false);
  CHECK(line.s1 == 1.0);  // only (0,1) joint-member
  CHECK(line.s2 == 2.0);
  CHECK(line.s12 == 2.0);
  CHECK(line.count == 1.0);

  const PairMoments lag0 = k.lag_pair_moments(marks.data(), mask.data(), 4, 0, false);
  CHECK(lag0.count == 3.0);
  CHECK(lag0.s1 == 7.0);
  CHECK(lag0.s12 == 21.0);
}

TEST_CASE("window_max: hand-computed case with wraparound") {
  const std::vector<double> marks = {0.0, 3.0, 0.0, 0.0, 1.0};
  const std::vector<double> mask = {0.0, 1.0, 0.0, 0.0, 1.0};
  std::vector<double> out_marks(5), out_mask(5);
  const auto& k = scalar_kernels();

  k.window_max(marks.data(), mask.data(), 5, 1, true, out_marks.data(), out_mask.data());
  CHECK(out_mask == std::vector<double>{1, 1, 1, 1, 1});
  CHECK(out_marks == std::vector<double>{3, 3, 3, 1, 1});

  k.window_max(marks.data(), mask.data(), 5, 1, false, out_marks.data(), out_mask.data());
  CHECK(out_mask == std::vector<double>{1, 1, 1, 1, 1});
  CHECK(out_marks == std::vector<double>{3, 3, 3, 1, 1});

  k.window_max(marks.data(), mask.data(), 5, 0, false, out_marks.data(), out_mask.data());
  CHECK(out_mask == std::vector<double>{0, 1, 0, 0, 1});
  CHECK(out_marks == std::vector<double>{0, 3, 0, 0, 1});
}

TEST_CASE("window_max: negative marks survive masking") {
  // The masked-out padding must be -inf, not 0: a window whose only member
  // mark is negative must return that negative value.
  const std::vector<double> marks = {0.0, -2.5, 0.0};
  const std::vector<double> mask = {0.0, 1.0, 0.0};
  std::vector<double> out_marks(3), out_mask(3);
  scalar_kernels().window_max(marks.data(), mask.data(), 3, 1, false, out_marks.data(),
                              out_mask.data());
  CHECK(out_mask == std::vector<double>{1, 1, 1});
  CHECK(out_marks == std::vector<double>{-2.5, -2.5, -2.5});
}

TEST_CASE("reduce_sum: matches plain accumulation") {
  const auto d = make_marked_data(1023, 5);
  const double got = scalar_kernels().reduce_sum(d.marks.data(), 1023);
  double want = 0;
  for (double v : d.marks) want += v;
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("scalar vs AVX2: bitwise-identical results") {
  const KernelTable* avx2 = avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable on this host; equivalence suite skipped");
    return;
  }
  const auto& ref = scalar_kernels();

  uint64_t rep = 0;
  for (long n : {1L, 2L, 3L, 4L, 5L, 7L, 8L, 16L, 33L, 100L, 1024L, 1025L}) {
    const Data d = make_marked_data(n, ++rep);
    std::vector<long> lags = {0L, 1L, n / 3, n / 2, n - 1};
    for (long lag : lags) {
      if (lag < 0 || lag >= n) continue;
      for (bool periodic : {true, false}) {
        const PairMoments a = ref.lag_pair_moments(d.marks.data(), d.mask.data(), n, lag, periodic);
        const PairMoments b =
            avx2->lag_pair_moments(d.marks.data(), d.mask.data(), n, lag, periodic);
        CHECK(a.s1 == b.s1);
        CHECK(a.s2 == b.s2);
        CHECK(a.s12 == b.s12);
        CHECK(a.s11 == b.s11);
        CHECK(a.s22 == b.s22);
        CHECK(a.count == b.count);
      }
    }
    for (long w : {0L, 1L, 2L, 5L, n}) {
      for (bool periodic : {true, false}) {
        std::vector<double> am(static_cast<size_t>(n)), ak(static_cast<size_t>(n));
        std::vector<double> bm(static_cast<size_t>(n)), bk(static_cast<size_t>(n));
        ref.window_max(d.marks.data(), d.mask.data(), n, w, periodic, am.data(), ak.data());
        avx2->window_max(d.marks.data(), d.mask.data(), n, w, periodic, bm.data(), bk.data());
        CHECK(am == bm);
        CHECK(ak == bk);
      }
    }
    CHECK(ref.reduce_sum(d.marks.data(), n) == avx2->reduce_sum(d.marks.data(), n));
  }
}

TEST_CASE("active_kernels: returns a usable table") {
  const auto& k = active_kernels();
  CHECK(k.lag_pair_moments != nullptr);
  CHECK(k.window_max != nullptr);
  CHECK(k.reduce_sum != nullptr);
  const std::string name = k.name;
  CHECK((name == "scalar" || name == "avx2"));
}

}  // TEST_SUITE
