#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmcs/gauss.hpp"
#include "rmcs/kernels.hpp"
#include "rmcs/simulate.hpp"

namespace rmcs::estimate {

// Pair statistics e(m1,m2)=m1, c(m1,m2)=m1*m2, v(m1,m2)=m1^2.  The reversed
// direction (kappa at -h) is the same pair set with the roles swapped, so it
// is read off the same accumulated moments.
enum class FTag { kE, kC, kV };
const char* f_tag_name(FTag tag);

enum class EdgeCorrection { kAuto, kMinusSampling, kPeriodicWraparound };

struct EstimatorConfig {
  std::vector<double> lags;      // r >= 0, each an integer multiple of the grid spacing
  std::vector<double> epsilons;  // dilation ladder, strictly descending, each >= spacing
  bool include_undilated = true; // also estimate at eps = 0 (simplified conditional form)
  EdgeCorrection edge = EdgeCorrection::kAuto;
};

struct KappaEstimate {
  FTag f_tag = FTag::kE;
  double r = 0;
  double eps = 0;
  double estimate = 0;      // NaN when !defined
  double stderr_rep = 0;    // across independent replicates (NaN when < 2 defined)
  double pairs = 0;         // total joint-member pair count
  bool defined = false;     // pairs > 0
};

struct NoPairsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dilated mark field on Xi_{+eps}: moving maximum of marks within distance
// eps (singletons from the side table re-injected).  Requires eps >= spacing.
struct DilatedField {
  std::vector<double> marks;  // 0 where mask == 0
  std::vector<double> mask;   // 0.0 / 1.0
};
DilatedField dilated_mark_field(const simulate::MarkedSetSample& sample, double eps);

// Streaming pair-moment accumulator.  Samples must be added in replicate
// order; all reductions run in that fixed order, so results do not depend on
// how sample generation was parallelized.
class KappaAccumulator {
 public:
  KappaAccumulator(const simulate::GridSpec& grid, EstimatorConfig cfg);

  void add_sample(const simulate::MarkedSetSample& sample);

  long replicates() const { return replicates_; }
  const EstimatorConfig& config() const { return cfg_; }
  const std::vector<double>& eps_levels() const { return eps_levels_; }  // ladder then 0

  // Pooled ratio-of-sums estimate per (eps, lag) row, with the replicate SE.
  // reversed = true gives the -h direction (second-point role).
  std::vector<KappaEstimate> estimates(FTag tag, bool reversed = false) const;

  // Derived characteristics at one (eps, lag) row from the pooled sums, with
  // standard errors from `n_batches` contiguous replicate batches.
  struct DerivedRow {
    double r = 0, eps = 0;
    double E = 0, gamma = 0, cov = 0, cor = 0, kmm = 0;
    double se_E = 0, se_gamma = 0, se_cov = 0, se_cor = 0, se_kmm = 0;
    double pairs = 0;
    bool defined = false;
  };
  DerivedRow derived_row(size_t eps_index, size_t lag_index, int n_batches) const;

  size_t row_index(size_t eps_index, size_t lag_index) const;
  const kernels::PairMoments& pooled(size_t row) const { return pooled_[row]; }
  double pooled_mark_sum(size_t eps_index) const { return marginal_sum_[eps_index]; }
  double pooled_member_count(size_t eps_index) const { return marginal_count_[eps_index]; }

 private:
  simulate::GridSpec grid_;
  EstimatorConfig cfg_;
  bool periodic_edge_ = true;
  std::vector<double> eps_levels_;
  std::vector<long> lag_nodes_;
  long replicates_ = 0;
  std::vector<kernels::PairMoments> pooled_;                // rows: eps-major, lag-minor
  std::vector<std::vector<kernels::PairMoments>> per_rep_;  // [replicate][row]
  std::vector<double> marginal_sum_, marginal_count_;       // per eps level
  std::vector<std::vector<double>> per_rep_marginal_;       // [replicate][2*eps]: sum, count
};

// Ratio-of-sums estimates of kappa_f over all samples for every (lag, eps)
// pair in cfg (the eps ladder plus eps = 0 when include_undilated).  Throws
// NoPairsError if some lag has zero joint-member pairs at every eps level.
std::vector<KappaEstimate> estimate_kappa(const std::vector<simulate::MarkedSetSample>& samples,
                                          FTag tag, const EstimatorConfig& cfg);

// Plug-in transforms of the kappa values at one lag (exact algebra of the
// defining identities).
struct KappaInputs {
  double e_plus = 0, e_minus = 0;  // kappa_e(h), kappa_e(-h)
  double c = 0;                    // kappa_c(h)
  double v_plus = 0, v_minus = 0;  // kappa_v(h), kappa_v(-h)
  double mean_mark = 0;            // m-bar
};
struct Characteristics {
  double E = 0, gamma = 0, cov = 0, cor = 0, kmm = 0;
};
Characteristics derive_characteristics(const KappaInputs& in);

// Linear extrapolation of the eps-ladder to eps = 0 (two smallest radii),
// with a weak-monotonicity diagnostic over the whole ladder.
struct EpsilonDiagnostic {
  double extrapolated = 0;
  bool weakly_monotone = false;
  int trend_sign = 0;  // sign of (estimate at largest eps) - (estimate at smallest eps)
};
EpsilonDiagnostic epsilon_limit_diagnostic(const std::vector<KappaEstimate>& ladder);

// CSV with the documented column set: kind, r, eps, estimate, stderr, pairs.
void write_estimates_csv(std::ostream& os, const std::vector<KappaEstimate>& rows);
void append_derived_csv(std::ostream& os, const std::string& kind_prefix,
                        const std::vector<KappaAccumulator::DerivedRow>& rows);

}  // namespace rmcs::estimate
