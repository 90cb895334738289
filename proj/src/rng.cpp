#include "rmcs/rng.hpp"

#include "rmcs/special.hpp"

namespace rmcs {

namespace {
constexpr uint32_t kW32A = 0x9E3779B9u;
constexpr uint32_t kW32B = 0xBB67AE85u;
constexpr uint32_t kM4x32A = 0xD2511F53u;
constexpr uint32_t kM4x32B = 0xCD9E8D57u;

inline void one_round(uint32_t c[4], const uint32_t k[2]) {
  const uint64_t p0 = static_cast<uint64_t>(kM4x32A) * c[0];
  const uint64_t p1 = static_cast<uint64_t>(kM4x32B) * c[2];
  const uint32_t lo0 = static_cast<uint32_t>(p0), hi0 = static_cast<uint32_t>(p0 >> 32);
  const uint32_t lo1 = static_cast<uint32_t>(p1), hi1 = static_cast<uint32_t>(p1 >> 32);
  const uint32_t r0 = hi1 ^ c[1] ^ k[0];
  const uint32_t r1 = lo1;
  const uint32_t r2 = hi0 ^ c[3] ^ k[1];
  const uint32_t r3 = lo0;
  c[0] = r0; c[1] = r1; c[2] = r2; c[3] = r3;
}
}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key) {
  uint32_t c[4] = {counter[0], counter[1], counter[2], counter[3]};
  uint32_t k[2] = {key[0], key[1]};
  for (int round = 0; round < 10; ++round) {
    one_round(c, k);
    if (round < 9) {
      k[0] += kW32A;
      k[1] += kW32B;
    }
  }
  return {c[0], c[1], c[2], c[3]};
}

uint64_t RandomStream::bits(uint64_t i) const {
  // One Philox block yields 128 bits; draw index i selects block i/2 and
  // half i%2, so consecutive indices are cheap and non-overlapping.
  const uint64_t block = i >> 1;
  const std::array<uint32_t, 4> ctr = {
      static_cast<uint32_t>(block), static_cast<uint32_t>(block >> 32),
      static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                       static_cast<uint32_t>(seed_ >> 32)};
  const auto out = philox4x32(ctr, key);
  if ((i & 1) == 0) return (static_cast<uint64_t>(out[1]) << 32) | out[0];
  return (static_cast<uint64_t>(out[3]) << 32) | out[2];
}

double RandomStream::uniform(uint64_t i) const {
  // Top 53 bits -> (0,1), offset by half an ulp so 0 is unreachable.
  return (static_cast<double>(bits(i) >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal(uint64_t i) const { return inverse_normal_cdf(uniform(i)); }

}  // namespace rmcs
