#include "rmcs/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rmcs::estimate {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void accumulate(kernels::PairMoments& into, const kernels::PairMoments& add) {
  into.s1 += add.s1;
  into.s2 += add.s2;
  into.s12 += add.s12;
  into.s11 += add.s11;
  into.s22 += add.s22;
  into.count += add.count;
}

double pick(const kernels::PairMoments& pm, FTag tag, bool reversed) {
  switch (tag) {
    case FTag::kE:
      return reversed ? pm.s2 : pm.s1;
    case FTag::kC:
      return pm.s12;
    case FTag::kV:
      return reversed ? pm.s22 : pm.s11;
  }
  return 0;
}

// Base (undilated) field: membership alone; zero-measure singletons stay out.
DilatedField base_field(const simulate::MarkedSetSample& sample) {
  DilatedField f;
  const size_t n = sample.membership.size();
  f.marks.resize(n);
  f.mask.resize(n);
  for (size_t i = 0; i < n; ++i) {
    f.mask[i] = sample.membership[i] ? 1.0 : 0.0;
    f.marks[i] = sample.membership[i] ? sample.marks[i] : 0.0;
  }
  return f;
}

DilatedField dilate(const simulate::MarkedSetSample& sample, double eps) {
  DilatedField base = base_field(sample);
  if (eps == 0.0) return base;
  const long n = static_cast<long>(base.marks.size());
  const double h = sample.grid.spacing;
  const long w = static_cast<long>(std::floor(eps / h + 1e-9));
  DilatedField out;
  out.marks.resize(base.marks.size());
  out.mask.resize(base.mask.size());
  kernels::active_kernels().window_max(base.marks.data(), base.mask.data(), n, w,
                                       sample.grid.periodic, out.marks.data(), out.mask.data());
  for (const auto& sg : sample.singletons) {
    for (long d = -w; d <= w; ++d) {
      long j = sg.node + d;
      if (sample.grid.periodic) {
        j %= n;
        if (j < 0) j += n;
      } else if (j < 0 || j >= n) {
        continue;
      }
      const size_t uj = static_cast<size_t>(j);
      if (out.mask[uj] == 0.0 || sg.mark > out.marks[uj]) out.marks[uj] = sg.mark;
      out.mask[uj] = 1.0;
    }
  }
  return out;
}

}  // namespace

const char* f_tag_name(FTag tag) {
  switch (tag) {
    case FTag::kE:
      return "e";
    case FTag::kC:
      return "c";
    case FTag::kV:
      return "v";
  }
  return "?";
}

DilatedField dilated_mark_field(const simulate::MarkedSetSample& sample, double eps) {
  if (sample.grid.dimension != 1)
    throw std::invalid_argument("dilated_mark_field: only 1-D samples are supported");
  if (!(eps >= sample.grid.spacing))
    throw std::invalid_argument("dilated_mark_field: eps must be >= the grid spacing");
  return dilate(sample, eps);
}

KappaAccumulator::KappaAccumulator(const simulate::GridSpec& grid, EstimatorConfig cfg)
    : grid_(grid), cfg_(std::move(cfg)) {
  grid_.validate();
  if (grid_.dimension != 1)
    throw std::invalid_argument("KappaAccumulator: only 1-D grids are supported");
  switch (cfg_.edge) {
    case EdgeCorrection::kAuto:
      periodic_edge_ = grid_.periodic;
      break;
    case EdgeCorrection::kPeriodicWraparound:
      if (!grid_.periodic)
        throw std::invalid_argument("KappaAccumulator: wraparound needs a periodic grid");
      periodic_edge_ = true;
      break;
    case EdgeCorrection::kMinusSampling:
      periodic_edge_ = false;
      break;
  }
  if (cfg_.lags.empty()) throw std::invalid_argument("KappaAccumulator: empty lag grid");
  const double h = grid_.spacing;
  const long n = grid_.total_nodes();
  for (double r : cfg_.lags) {
    if (!(r >= 0)) throw std::invalid_argument("KappaAccumulator: lags must be >= 0");
    const long k = std::lround(r / h);
    if (std::abs(static_cast<double>(k) * h - r) > 1e-9 * std::max(1.0, r))
      throw std::invalid_argument("KappaAccumulator: lag is not a multiple of the grid spacing");
    if (!periodic_edge_ && k > n / 2)
      throw std::invalid_argument("KappaAccumulator: lag exceeds half the window (minus-sampling)");
    if (periodic_edge_ && k >= n)
      throw std::invalid_argument("KappaAccumulator: lag exceeds the periodic window");
    lag_nodes_.push_back(k);
  }
  for (size_t i = 0; i < cfg_.epsilons.size(); ++i) {
    if (!(cfg_.epsilons[i] >= h - 1e-12))
      throw std::invalid_argument("KappaAccumulator: eps must be >= the grid spacing");
    if (i > 0 && !(cfg_.epsilons[i] < cfg_.epsilons[i - 1]))
      throw std::invalid_argument("KappaAccumulator: eps ladder must be strictly descending");
    eps_levels_.push_back(cfg_.epsilons[i]);
  }
  if (cfg_.include_undilated) eps_levels_.push_back(0.0);
  if (eps_levels_.empty())
    throw std::invalid_argument("KappaAccumulator: no eps levels (empty ladder, no undilated)");
  pooled_.assign(eps_levels_.size() * lag_nodes_.size(), kernels::PairMoments{});
  marginal_sum_.assign(eps_levels_.size(), 0.0);
  marginal_count_.assign(eps_levels_.size(), 0.0);
}

size_t KappaAccumulator::row_index(size_t eps_index, size_t lag_index) const {
  return eps_index * lag_nodes_.size() + lag_index;
}

void KappaAccumulator::add_sample(const simulate::MarkedSetSample& sample) {
  if (sample.grid.dimension != grid_.dimension || sample.grid.periodic != grid_.periodic ||
      sample.grid.total_nodes() != grid_.total_nodes() ||
      std::abs(sample.grid.spacing - grid_.spacing) > 1e-12 * grid_.spacing)
    throw std::invalid_argument("KappaAccumulator: sample grid does not match");

  const auto& kt = kernels::active_kernels();
  const long n = grid_.total_nodes();
  std::vector<kernels::PairMoments> rep_rows(pooled_.size());
  std::vector<double> rep_marg(2 * eps_levels_.size());
  for (size_t ei = 0; ei < eps_levels_.size(); ++ei) {
    const DilatedField field = dilate(sample, eps_levels_[ei]);
    for (size_t li = 0; li < lag_nodes_.size(); ++li) {
      rep_rows[row_index(ei, li)] = kt.lag_pair_moments(field.marks.data(), field.mask.data(), n,
                                                        lag_nodes_[li], periodic_edge_);
    }
    rep_marg[2 * ei] = kt.reduce_sum(field.marks.data(), n);
    rep_marg[2 * ei + 1] = kt.reduce_sum(field.mask.data(), n);
  }
  for (size_t row = 0; row < pooled_.size(); ++row) accumulate(pooled_[row], rep_rows[row]);
  for (size_t ei = 0; ei < eps_levels_.size(); ++ei) {
    marginal_sum_[ei] += rep_marg[2 * ei];
    marginal_count_[ei] += rep_marg[2 * ei + 1];
  }
  per_rep_.push_back(std::move(rep_rows));
  per_rep_marginal_.push_back(std::move(rep_marg));
  ++replicates_;
}

std::vector<KappaEstimate> KappaAccumulator::estimates(FTag tag, bool reversed) const {
  std::vector<KappaEstimate> out;
  out.reserve(pooled_.size());
  for (size_t ei = 0; ei < eps_levels_.size(); ++ei) {
    for (size_t li = 0; li < lag_nodes_.size(); ++li) {
      const size_t row = row_index(ei, li);
      const kernels::PairMoments& pm = pooled_[row];
      KappaEstimate est;
      est.f_tag = tag;
      est.r = static_cast<double>(lag_nodes_[li]) * grid_.spacing;
      est.eps = eps_levels_[ei];
      est.pairs = pm.count;
      est.defined = pm.count > 0;
      est.estimate = est.defined ? pick(pm, tag, reversed) / pm.count : kNaN;
      // Replicate spread of the per-replicate ratios.
      double mean = 0;
      long m = 0;
      for (const auto& rep : per_rep_) {
        const kernels::PairMoments& r = rep[row];
        if (r.count > 0) {
          mean += pick(r, tag, reversed) / r.count;
          ++m;
        }
      }
      if (m >= 2) {
        mean /= static_cast<double>(m);
        double ss = 0;
        for (const auto& rep : per_rep_) {
          const kernels::PairMoments& r = rep[row];
          if (r.count > 0) {
            const double d = pick(r, tag, reversed) / r.count - mean;
            ss += d * d;
          }
        }
        est.stderr_rep = std::sqrt(ss / (static_cast<double>(m) * (m - 1)));
      } else {
        est.stderr_rep = kNaN;
      }
      out.push_back(est);
    }
  }
  return out;
}

Characteristics derive_characteristics(const KappaInputs& in) {
  Characteristics out;
  out.E = in.e_plus;
  out.gamma = 0.5 * (in.v_plus + in.v_minus) - in.c;
  out.cov = in.c - in.e_plus * in.e_minus;
  const double var_p = in.v_plus - in.e_plus * in.e_plus;
  const double var_m = in.v_minus - in.e_minus * in.e_minus;
  if (!(var_p > 0) || !(var_m > 0))
    throw DegenerateCaseError("derive_characteristics: nonpositive mark variance for cor");
  out.cor = out.cov / std::sqrt(var_p * var_m);
  if (in.mean_mark == 0)
    throw DegenerateCaseError("derive_characteristics: zero mean mark for k_mm");
  out.kmm = in.c / (in.mean_mark * in.mean_mark);
  return out;
}

KappaAccumulator::DerivedRow KappaAccumulator::derived_row(size_t eps_index, size_t lag_index,
                                                           int n_batches) const {
  if (n_batches < 2) throw std::invalid_argument("derived_row: need >= 2 batches");
  const size_t row = row_index(eps_index, lag_index);
  DerivedRow out;
  out.r = static_cast<double>(lag_nodes_[lag_index]) * grid_.spacing;
  out.eps = eps_levels_[eps_index];
  out.pairs = pooled_[row].count;
  if (!(pooled_[row].count > 0) || !(marginal_count_[eps_index] > 0)) return out;

  auto derive_from = [&](const kernels::PairMoments& pm, double msum,
                         double mcount) -> Characteristics {
    KappaInputs in;
    in.e_plus = pm.s1 / pm.count;
    in.e_minus = pm.s2 / pm.count;
    in.c = pm.s12 / pm.count;
    in.v_plus = pm.s11 / pm.count;
    in.v_minus = pm.s22 / pm.count;
    in.mean_mark = msum / mcount;
    return derive_characteristics(in);
  };

  const Characteristics full =
      derive_from(pooled_[row], marginal_sum_[eps_index], marginal_count_[eps_index]);
  out.E = full.E;
  out.gamma = full.gamma;
  out.cov = full.cov;
  out.cor = full.cor;
  out.kmm = full.kmm;

  // Batch means over contiguous replicate blocks.
  std::vector<Characteristics> batch_vals;
  const long reps = replicates_;
  for (int b = 0; b < n_batches; ++b) {
    const long lo = reps * b / n_batches, hi = reps * (b + 1) / n_batches;
    if (hi <= lo) continue;
    kernels::PairMoments pm;
    double msum = 0, mcount = 0;
    for (long rep = lo; rep < hi; ++rep) {
      accumulate(pm, per_rep_[static_cast<size_t>(rep)][row]);
      msum += per_rep_marginal_[static_cast<size_t>(rep)][2 * eps_index];
      mcount += per_rep_marginal_[static_cast<size_t>(rep)][2 * eps_index + 1];
    }
    if (!(pm.count > 0) || !(mcount > 0)) continue;
    try {
      batch_vals.push_back(derive_from(pm, msum, mcount));
    } catch (const DegenerateCaseError&) {
      // A degenerate batch contributes no spread information.
    }
  }
  if (batch_vals.size() >= 2) {
    auto se_of = [&](auto getter) {
      double mean = 0;
      for (const auto& v : batch_vals) mean += getter(v);
      mean /= static_cast<double>(batch_vals.size());
      double ss = 0;
      for (const auto& v : batch_vals) {
        const double d = getter(v) - mean;
        ss += d * d;
      }
      const double nb = static_cast<double>(batch_vals.size());
      return std::sqrt(ss / (nb * (nb - 1)));
    };
    out.se_E = se_of([](const Characteristics& c) { return c.E; });
    out.se_gamma = se_of([](const Characteristics& c) { return c.gamma; });
    out.se_cov = se_of([](const Characteristics& c) { return c.cov; });
    out.se_cor = se_of([](const Characteristics& c) { return c.cor; });
    out.se_kmm = se_of([](const Characteristics& c) { return c.kmm; });
    out.defined = true;
  }
  return out;
}

std::vector<KappaEstimate> estimate_kappa(const std::vector<simulate::MarkedSetSample>& samples,
                                          FTag tag, const EstimatorConfig& cfg) {
  if (samples.empty()) throw std::invalid_argument("estimate_kappa: need >= 1 sample");
  KappaAccumulator acc(samples[0].grid, cfg);
  for (const auto& s : samples) acc.add_sample(s);
  std::vector<KappaEstimate> rows = acc.estimates(tag);
  const size_t n_lags = cfg.lags.size();
  const size_t n_eps = acc.eps_levels().size();
  for (size_t li = 0; li < n_lags; ++li) {
    bool any = false;
    for (size_t ei = 0; ei < n_eps; ++ei) any = any || rows[ei * n_lags + li].defined;
    if (!any) {
      std::ostringstream os;
      os << "estimate_kappa: no joint-member pairs at lag r = " << cfg.lags[li]
         << " for any eps level";
      throw NoPairsError(os.str());
    }
  }
  return rows;
}

EpsilonDiagnostic epsilon_limit_diagnostic(const std::vector<KappaEstimate>& ladder) {
  std::vector<std::pair<double, double>> pts;  // (eps, estimate), eps > 0 only
  for (const auto& k : ladder)
    if (k.eps > 0 && k.defined) pts.emplace_back(k.eps, k.estimate);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (pts.size() < 3)
    throw std::invalid_argument("epsilon_limit_diagnostic: need >= 3 defined eps levels");

  EpsilonDiagnostic out;
  const double e1 = pts[pts.size() - 1].first, v1 = pts[pts.size() - 1].second;
  const double e2 = pts[pts.size() - 2].first, v2 = pts[pts.size() - 2].second;
  out.extrapolated = v1 - e1 * (v2 - v1) / (e2 - e1);

  double scale = 0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.second));
  const double slack = 1e-9 * std::max(1.0, scale);
  bool non_incr = true, non_decr = true;
  for (size_t i = 1; i < pts.size(); ++i) {
    const double d = pts[i].second - pts[i - 1].second;  // shrinking eps direction
    if (d > slack) non_incr = false;
    if (d < -slack) non_decr = false;
  }
  out.weakly_monotone = non_incr || non_decr;
  const double span = pts.front().second - pts.back().second;
  out.trend_sign = (span > slack) ? 1 : (span < -slack ? -1 : 0);
  return out;
}

void write_estimates_csv(std::ostream& os, const std::vector<KappaEstimate>& rows) {
  char line[200];
  for (const auto& k : rows) {
    std::snprintf(line, sizeof line, "kappa_%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", f_tag_name(k.f_tag),
                  k.r, k.eps, k.estimate, k.stderr_rep, k.pairs);
    os << line;
  }
}

void append_derived_csv(std::ostream& os, const std::string& kind_prefix,
                        const std::vector<KappaAccumulator::DerivedRow>& rows) {
  char line[200];
  for (const auto& d : rows) {
    const struct {
      const char* name;
      double v, se;
    } items[5] = {{"E", d.E, d.se_E},
                  {"gamma", d.gamma, d.se_gamma},
                  {"cov", d.cov, d.se_cov},
                  {"cor", d.cor, d.se_cor},
                  {"kmm", d.kmm, d.se_kmm}};
    for (const auto& it : items) {
      std::snprintf(line, sizeof line, "%s%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", kind_prefix.c_str(),
                    it.name, d.r, d.eps, it.v, it.se, d.pairs);
      os << line;
    }
  }
}

}  // namespace rmcs::estimate
