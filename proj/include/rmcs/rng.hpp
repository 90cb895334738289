#pragma once

#include <array>
#include <cstdint>

namespace rmcs {

// Philox4x32-10 block cipher (Salmon et al., SC 2011).  Counter-based: the
// k-th draw of a given (seed, stream) is a pure function of (seed, stream, k),
// so replicates are reproducible regardless of execution order or thread
// count.
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key);

// A logical stream of random numbers: key = seed, counter = (index, stream).
// Streams with distinct ids never overlap.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

  // i-th 64-bit uniform word of the stream.
  uint64_t bits(uint64_t i) const;

  // i-th uniform double in (0,1) (53-bit resolution, never exactly 0 or 1).
  double uniform(uint64_t i) const;

  // i-th standard normal via inverse-CDF transform of uniform(i).
  double normal(uint64_t i) const;

 private:
  uint64_t seed_;
  uint64_t stream_;
};

// Stream-id layout used across the project: a purpose tag in the top byte so
// different consumers of the same seed and replicate index never collide.
enum class StreamPurpose : uint64_t {
  kFieldSpectrum = 1,  // GRF spectral draws
  kModelOffset = 2,    // uniform shift xi of the deterministic models
  kMonteCarlo = 3,     // scalar Monte Carlo oracles
  kGeneric = 4,
};

inline uint64_t stream_id(StreamPurpose purpose, uint64_t replicate) {
  return (static_cast<uint64_t>(purpose) << 56) | (replicate & 0x00FFFFFFFFFFFFFFull);
}

}  // namespace rmcs
