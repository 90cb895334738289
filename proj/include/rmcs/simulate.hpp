#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "rmcs/covariance.hpp"

namespace rmcs::simulate {

// Regular grid over [0, extent) per axis (periodic) or [0, extent] (bounded).
struct GridSpec {
  int dimension = 1;
  std::array<double, 2> extent{1.0, 0.0};
  double spacing = 1.0;
  bool periodic = true;

  long nodes_along(int axis) const;
  long total_nodes() const;
  double coordinate(long flat_index, int axis) const;  // row-major flattening
  void validate() const;  // dimension, integral extent/spacing, memory budget
};

// One realization of a marked set on a grid.  marks[i] is meaningful only
// where membership[i] == 1 and is 0 elsewhere.  Zero-measure isolated points
// (Example-3.1-style singletons) are carried in a side table rather than in
// `membership`: on the continuum they contribute nothing to undilated
// area-based membership, and folding them into `membership` would let single
// grid nodes stand in for sets of measure zero.  Dilation re-injects them.
struct Singleton {
  long node;
  double mark;
};

struct MarkedSetSample {
  GridSpec grid;
  std::vector<std::uint8_t> membership;
  std::vector<double> marks;
  std::vector<Singleton> singletons;
  std::string model;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

// Stationary centered unit-variance Gaussian field sampler.  Factorizations
// are computed once at construction and reused across replicates:
//   - periodic grids: circulant diagonalization by FFT (eigenvalues of the
//     wrapped covariance; tiny negatives >= -1e-10 * max clipped and counted),
//   - otherwise, or when the circulant spectrum is genuinely negative: dense
//     symmetric eigen-factorization, available up to 4096 nodes.
// sample() is deterministic in (seed, replicate) alone; instances are not
// thread-safe (give each worker its own sampler).
class GrfSampler {
 public:
  GrfSampler(const GridSpec& grid, const CovarianceModel& cov);
  ~GrfSampler();
  GrfSampler(const GrfSampler&) = delete;
  GrfSampler& operator=(const GrfSampler&) = delete;

  std::vector<double> sample(std::uint64_t seed, std::uint64_t replicate);

  const std::string& method() const { return method_; }  // "circulant" | "dense"
  long clipped_eigenvalues() const { return clipped_; }
  double most_negative_eigenvalue() const { return most_negative_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string method_;
  long clipped_ = 0;
  double most_negative_ = 0;
};

// One-shot convenience wrapper around GrfSampler.
std::vector<double> sample_grf(const GridSpec& grid, const CovarianceModel& cov,
                               std::uint64_t seed, std::uint64_t replicate = 0);

// Excursion set at threshold t: membership = field >= t, marks = field there.
MarkedSetSample excursion_sample(const GridSpec& grid, const std::vector<double>& field, double t,
                                 std::uint64_t seed, std::uint64_t replicate);

// 1-periodic segment [xi, xi+p] with triangle marks rising to p/2 at the
// midpoint; p in (2/3, 1].  Grid: 1-D periodic, nodes_per_period nodes per
// unit period (spacing <= p/200 enforced), n_periods periods.
MarkedSetSample periodic_triangle_sample(double p, std::uint64_t seed, std::uint64_t replicate,
                                         long nodes_per_period = 2000, long n_periods = 1);

// 2-periodic model: segments [2z-p, 2z+p] plus isolated singletons {2z+1},
// all shifted by a random xi; p in (0, 1/3).  Marks: distance to the set
// boundary (the default mark rule; singletons carry mark 0).  Singletons are
// snapped to the nearest grid node and stored in the side table.
// nodes_per_period counts nodes per length-2 period and must be even so that
// lag 1 is an exact node offset.
MarkedSetSample segment_singleton_sample(double p, std::uint64_t seed, std::uint64_t replicate,
                                         long nodes_per_period = 400, long n_periods = 50);

// Flat exports: coordinate(s), membership, singleton flag, mark.
void write_sample_csv(const MarkedSetSample& sample, std::ostream& os);
void write_sample_binary(const MarkedSetSample& sample, std::ostream& os);

}  // namespace rmcs::simulate
