#include <doctest.h>

#include <cmath>

#include "rmcs/rng.hpp"

using namespace rmcs;

TEST_SUITE("rng") {

TEST_CASE("philox4x32: published known-answer vectors (10 rounds)") {
  // Salmon et al. reference vectors: zeros, all-ones, pi-digit stimulus.
  const auto zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  const auto pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u});
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("RandomStream: counter-based determinism and stream separation") {
  const RandomStream s(123456789ull, stream_id(StreamPurpose::kGeneric, 7));
  CHECK(s.bits(0) == s.bits(0));
  CHECK(s.bits(0) != s.bits(1));
  CHECK(s.uniform(42) == s.uniform(42));

  const RandomStream same(123456789ull, stream_id(StreamPurpose::kGeneric, 7));
  CHECK(same.bits(99) == s.bits(99));

  const RandomStream other_rep(123456789ull, stream_id(StreamPurpose::kGeneric, 8));
  const RandomStream other_purpose(123456789ull, stream_id(StreamPurpose::kMonteCarlo, 7));
  const RandomStream other_seed(987654321ull, stream_id(StreamPurpose::kGeneric, 7));
  CHECK(other_rep.bits(0) != s.bits(0));
  CHECK(other_purpose.bits(0) != s.bits(0));
  CHECK(other_seed.bits(0) != s.bits(0));
}

TEST_CASE("stream_id: purpose occupies the top byte") {
  CHECK(stream_id(StreamPurpose::kFieldSpectrum, 0) == (1ull << 56));
  CHECK(stream_id(StreamPurpose::kModelOffset, 5) == ((2ull << 56) | 5ull));
  // Replicate field is truncated, never bleeding into the purpose byte.
  CHECK((stream_id(StreamPurpose::kGeneric, ~0ull) >> 56) == 4ull);
}

TEST_CASE("uniform: open-interval range and halves balance") {
  const RandomStream s(2024ull, stream_id(StreamPurpose::kGeneric, 0));
  int below = 0;
  const int n = 4096;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(static_cast<uint64_t>(i));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    if (u < 0.5) ++below;
  }
  CHECK(std::abs(below - n / 2) < 4 * std::sqrt(n / 4.0));  // ~4 sigma
}

TEST_CASE("normal: first two moments") {
  const RandomStream s(77ull, stream_id(StreamPurpose::kGeneric, 3));
  const int n = 8192;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(static_cast<uint64_t>(i));
    CHECK(std::isfinite(z));
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

}  // TEST_SUITE
