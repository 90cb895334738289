#include "rmcs/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "rmcs/covariance.hpp"
#include "rmcs/estimate.hpp"
#include "rmcs/examples.hpp"
#include "rmcs/gauss.hpp"
#include "rmcs/quadrature.hpp"
#include "rmcs/rng.hpp"
#include "rmcs/simulate.hpp"

namespace rmcs::experiments {
namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);  // LF line endings on every platform
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

struct Ctx {
  json cfg;
  std::string out_dir;
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<CheckResult> checks;

  std::string path(const std::string& file) const { return out_dir + "/" + file; }

  void check_abs(const std::string& name, double measured, double expected, double tol,
                 const std::string& note = "") {
    CheckResult c{name, measured, expected, tol * tol_scale,
                  std::abs(measured - expected) <= tol * tol_scale, note};
    checks.push_back(std::move(c));
  }
  void check_le(const std::string& name, double measured, double bound,
                const std::string& note = "") {
    CheckResult c{name, measured, bound, 0.0, measured <= bound, note};
    checks.push_back(std::move(c));
  }
  void check_ge(const std::string& name, double measured, double bound,
                const std::string& note = "") {
    CheckResult c{name, measured, bound, 0.0, measured >= bound, note};
    checks.push_back(std::move(c));
  }
  void check_true(const std::string& name, bool ok, const std::string& note = "") {
    CheckResult c{name, ok ? 1.0 : 0.0, 1.0, 0.0, ok, note};
    checks.push_back(std::move(c));
  }
};

// Static replicate chunking: worker w owns [R*w/W, R*(w+1)/W).  Workers write
// into disjoint preallocated slots, so results are independent of W.
void parallel_replicates(long replicates, int workers,
                         const std::function<void(long, int)>& fn) {
  if (workers <= 1) {
    for (long r = 0; r < replicates; ++r) fn(r, 0);
    return;
  }
  std::vector<std::thread> threads;
  std::mutex err_mu;
  std::exception_ptr first_error;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      const long lo = replicates * w / workers;
      const long hi = replicates * (w + 1) / workers;
      try {
        for (long r = lo; r < hi; ++r) fn(r, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = a + (b - a) * static_cast<double>(i) / (n - 1);
  return out;
}

// ---------------------------------------------------------------- theory-t0

void run_theory_t0(Ctx& ctx) {
  const int points = ctx.cfg.at("rho_points").get<int>();
  auto rho = linspace(-1.0, 1.0, points);
  auto os = open_out(ctx.path("theory_t0_curves.csv"));
  os << "rho,E,cov,gamma,cor,kmm\n";
  // cov at t=0 is f0, absolutely monotone on [0,1], hence nondecreasing there.
  // (E itself is not monotone in rho: it peaks around rho ~ 0.69.)
  double min_diff_cov = HUGE_VAL;
  double prev_cov = 0;
  bool have_prev_cov = false;
  for (size_t i = 0; i < rho.size(); ++i) {
    const gauss::TheoryT0 th = gauss::theory_t0(rho[i]);
    os << fmt(rho[i]) << ',' << fmt(th.E) << ',' << fmt(th.cov) << ',' << fmt(th.gamma) << ','
       << fmt(th.cor) << ',' << fmt(th.kmm) << '\n';
    if (rho[i] >= 0.0) {
      if (have_prev_cov) min_diff_cov = std::min(min_diff_cov, th.cov - prev_cov);
      prev_cov = th.cov;
      have_prev_cov = true;
    }
  }

  const gauss::TheoryT0 at1 = gauss::theory_t0(1.0);
  const gauss::TheoryT0 at0 = gauss::theory_t0(0.0);
  const gauss::TheoryT0 atm1 = gauss::theory_t0(-1.0);
  const double tol = 1e-10;
  ctx.check_abs("E-at-rho-1", at1.E, std::sqrt(2.0 / kPi), tol);
  ctx.check_abs("cov-at-rho-1", at1.cov, 1.0 - 2.0 / kPi, tol);
  ctx.check_abs("kmm-at-rho-1", at1.kmm, kPi / 2.0, tol);
  ctx.check_abs("cor-at-rho-1", at1.cor, 1.0, tol);
  ctx.check_abs("cov-at-rho-0", at0.cov, 0.0, tol);
  ctx.check_abs("gamma-at-rho-0", at0.gamma, 1.0 - 2.0 / kPi, tol);
  ctx.check_abs("kmm-at-rho-0", at0.kmm, 1.0, tol);
  ctx.check_abs("cor-at-rho-0", at0.cor, 0.0, tol);
  ctx.check_abs("E-at-rho-minus1", atm1.E, 0.0, tol);
  ctx.check_abs("cov-at-rho-minus1", atm1.cov, 0.0, tol);
  ctx.check_abs("kmm-at-rho-minus1", atm1.kmm, 0.0, tol);
  ctx.check_abs("cor-at-rho-minus1", atm1.cor,
                (4.0 / 3.0 - kPi / 2.0) / (8.0 / 3.0 - kPi / 2.0), tol,
                "continuous limit at rho = -1");
  ctx.check_ge("cov-nondecreasing-on-0-1-min-step", min_diff_cov, -1e-12);
}

// ---------------------------------------------------------------- general-t

void run_general_t(Ctx& ctx) {
  const auto t_values = ctx.cfg.at("t_values").get<std::vector<double>>();
  const int points = ctx.cfg.at("rho_points").get<int>();
  const double rho_min = ctx.cfg.at("rho_min").get<double>();
  std::vector<PlotPanel> panels;
  for (double t : t_values) {
    PlotPanel p;
    p.t = t;
    p.rho = linspace(rho_min, 1.0, points);
    p.f.reserve(p.rho.size());
    for (double r : p.rho) p.f.push_back(gauss::f_t(t, r));
    panels.push_back(std::move(p));
  }
  emit_plot_data(panels, ctx.out_dir);

  ctx.check_abs("f0-at-rho-0", gauss::f_t(0.0, 0.0), 0.0, 1e-12);
  ctx.check_abs("f0-at-rho-1", gauss::f_t(0.0, 1.0), 1.0 - 2.0 / kPi, 1e-10);
  for (const auto& p : panels) {
    double min_slope = HUGE_VAL;
    for (size_t i = 1; i < p.rho.size(); ++i) {
      if (p.rho[i - 1] < 0.0) continue;  // the monotonicity claim is for rho in [0,1]
      min_slope = std::min(min_slope, (p.f[i] - p.f[i - 1]) / (p.rho[i] - p.rho[i - 1]));
    }
    std::ostringstream nm;
    nm << "ft-nondecreasing-on-[0,1]-t=" << p.t;
    ctx.check_ge(nm.str(), min_slope, -1e-8);
  }
}

// ---------------------------------------------------------- derivative-check

void run_derivative_check(Ctx& ctx) {
  const auto t_values = ctx.cfg.at("t_values").get<std::vector<double>>();
  const double ell = ctx.cfg.at("length_scale").get<double>();
  const CovarianceModel model = CovarianceModel::gaussian(ell);

  auto richardson = [](const std::function<double(double)>& g, double h0) {
    const double g0 = g(0.0);
    auto D = [&](double h) { return (g(h) - g0) / h; };
    const double d0 = D(h0), d1 = D(h0 / 2), d2 = D(h0 / 4);
    const double r1a = 2 * d1 - d0, r1b = 2 * d2 - d1;
    return (4 * r1b - r1a) / 3;
  };

  auto os = open_out(ctx.path("derivative_check.csv"));
  os << "t,closed_cov_deriv,fd_cov_deriv,closed_setcov_deriv,fd_setcov_deriv\n";
  for (double t : t_values) {
    const ThresholdModel tm{t, model};
    const double closed_cov = gauss::cov_deriv_at_zero(tm).value();
    const double fd_cov =
        richardson([&](double r) { return gauss::f_t(t, model(r)); }, 0.02);
    const double closed_set = gauss::set_cov_deriv_at_zero(tm).value();
    const double fd_set =
        richardson([&](double r) { return gauss::orthant_P(t, model(r)); }, 0.02);
    os << fmt(t) << ',' << fmt(closed_cov) << ',' << fmt(fd_cov) << ',' << fmt(closed_set) << ','
       << fmt(fd_set) << '\n';
    std::ostringstream nm;
    nm << "cov-deriv-rel-err-t=" << t;
    ctx.check_le(nm.str(), std::abs(fd_cov - closed_cov) / std::abs(closed_cov),
                 1e-3 * ctx.tol_scale);
    std::ostringstream nm2;
    nm2 << "setcov-deriv-rel-err-t=" << t;
    ctx.check_le(nm2.str(), std::abs(fd_set - closed_set) / std::abs(closed_set),
                 1e-3 * ctx.tol_scale);
  }

  double min_num = HUGE_VAL;
  for (double t : linspace(-10.0, 10.0, 401))
    min_num = std::min(min_num, gauss::cov_deriv_numerator(t));
  ctx.check_ge("cov-deriv-numerator-min", min_num, 0.0, "positivity on t in [-10,10]");

  const ExtendedReal rough =
      gauss::cov_deriv_at_zero(ThresholdModel{0.0, CovarianceModel::exponential(1.0)});
  ctx.check_true("exponential-R-gives-minus-infinity", rough.is_neg_infinity());
}

// -------------------------------------------------------------- definiteness

void run_definiteness(Ctx& ctx) {
  const int n_max = ctx.cfg.at("n_max").get<int>();
  const int n_quad = ctx.cfg.at("n_quad").get<int>();
  const auto s_values = ctx.cfg.at("s_values").get<std::vector<double>>();

  auto gamma_cos = [](double r) { return gauss::theory_t0(std::cos(r)).gamma; };
  auto exp_gamma = [&gamma_cos](double r) { return std::exp(-gamma_cos(r)); };

  const definiteness::FourierResult fr =
      definiteness::fourier_coefficients(exp_gamma, 2 * kPi, n_max, n_quad);
  ctx.check_abs("exp-minus-gamma-raw-first-fourier", fr.raw[1], -0.03364, 1e-3,
                "raw inner product int_0^{2pi} f cos(r) dr");
  ctx.check_true("exp-minus-gamma-a1-negative", fr.a[1] < 0,
                 "normalized first cosine coefficient");

  const definiteness::DefinitenessReport cnd = definiteness::cnd_test_via_exponential(
      gamma_cos, s_values, definiteness::PdMethod::kFourierPeriodic, 2 * kPi, n_max);
  ctx.check_true("mark-variogram-not-cnd", cnd.verdict == "not-cnd", cnd.detail);

  auto kmm_exp = [](double r) { return gauss::theory_t0(std::exp(-r)).kmm; };
  const auto r_grid = linspace(0.005, 1.0, 200);
  const definiteness::DefinitenessReport kmm_max =
      definiteness::max_at_origin_test(kmm_exp, r_grid);
  ctx.check_true("kmm-not-pd-max-at-origin", kmm_max.verdict == "not-pd", kmm_max.detail);
  const double witness_R = std::exp(-kmm_max.witness_location);
  ctx.check_ge("kmm-witness-R-above-threshold", witness_R,
               (kPi * kPi - 1.0) / (kPi * kPi + 1.0), "R(r*) > (pi^2-1)/(pi^2+1)");

  std::vector<std::vector<double>> small_lags;
  for (int k = 0; k <= 10; ++k) small_lags.push_back({0.05 * k});
  const definiteness::DefinitenessReport kmm_gram = definiteness::gram_pd_test(kmm_exp, small_lags);
  ctx.check_true("kmm-not-pd-gram", kmm_gram.verdict == "not-pd", kmm_gram.detail);

  auto cov_exp = [](double r) { return gauss::theory_t0(std::exp(-r)).cov; };
  const definiteness::DefinitenessReport cov_max = definiteness::max_at_origin_test(cov_exp, r_grid);
  ctx.check_true("cov-pd-consistent", cov_max.verdict == "pd-consistent", cov_max.detail);

  RandomStream pts_stream(ctx.seed, stream_id(StreamPurpose::kGeneric, 0));
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 10; ++k)
    pts.push_back({3.0 * pts_stream.uniform(2 * static_cast<std::uint64_t>(k)),
                   3.0 * pts_stream.uniform(2 * static_cast<std::uint64_t>(k) + 1)});
  const definiteness::DefinitenessReport gauss_gram =
      definiteness::gram_pd_test([](double r) { return std::exp(-r * r); }, pts);
  ctx.check_true("gaussian-kernel-pd-consistent", gauss_gram.verdict == "pd-consistent",
                 gauss_gram.detail);

  const definiteness::DefinitenessReport brown = definiteness::cnd_test_via_exponential(
      [](double r) { return r * r; }, s_values, definiteness::PdMethod::kGramMatrix);
  ctx.check_true("r-squared-cnd-consistent", brown.verdict == "cnd-consistent", brown.detail);

  json out;
  out["fourier"] = {{"period", fr.period},
                    {"normalized", fr.a},
                    {"raw_inner_products", fr.raw},
                    {"quad_error", fr.quad_error},
                    {"convention",
                     "a_0 = (1/P) int f; a_n = (2/P) int f cos(2 pi n r / P); raw entries are "
                     "the unnormalized inner products (the -0.03364 headline for the cosine "
                     "model is a raw value)"}};
  out["reports"] = json::array();
  auto add_report = [&out](const std::string& label, const definiteness::DefinitenessReport& r) {
    json j = report_to_json(r);
    j["label"] = label;
    out["reports"].push_back(j);
  };
  add_report("mark-variogram-cnd-via-exponential", cnd);
  add_report("kmm-max-at-origin", kmm_max);
  add_report("kmm-gram", kmm_gram);
  add_report("cov-max-at-origin", cov_max);
  add_report("gaussian-kernel-gram", gauss_gram);
  add_report("r-squared-cnd", brown);
  open_out(ctx.path("definiteness_reports.json")) << out.dump(2) << '\n';
}

// -------------------------------------------------------------- monotonicity

void run_monotonicity(Ctx& ctx) {
  const int order = ctx.cfg.at("order").get<int>();
  for (const std::string tag : {"f0", "g0"}) {
    try {
      const mono::MonotonicityReport rep = mono::verify_absolute_monotonicity(tag, order);
      open_out(ctx.path("monotonicity_" + tag + ".json")) << report_to_json(rep).dump(2) << '\n';
      ctx.check_true(tag + "-verdict", rep.verdict == "verified-to-order-" + std::to_string(order));
      ctx.check_ge(tag + "-min-coefficient", rep.min_coefficient, -1e-30);
      ctx.check_le(tag + "-circle-max", rep.circle_max_abs_h2, 0.182);
      ctx.check_abs(tag + "-circle-argmax", rep.circle_argmax_angle, 0.0, 0.0);
      ctx.check_le(tag + "-h2-at-1", std::abs(rep.h2_at_one), 0.08);
    } catch (const std::exception& e) {
      ctx.check_true(tag + "-verdict", false, e.what());
    }
  }
}

// ---------------------------------------------------------- periodic-example

void run_periodic_example(Ctx& ctx) {
  const auto p_values = ctx.cfg.at("p_values").get<std::vector<double>>();
  const long replicates = ctx.cfg.at("replicates").get<long>();
  const long nodes = ctx.cfg.at("nodes_per_period").get<long>();
  const int n_lags = ctx.cfg.at("n_lags").get<int>();
  const int n_batches = ctx.cfg.at("n_batches").get<int>();
  const double h = 1.0 / static_cast<double>(nodes);

  for (double p : p_values) {
    std::ostringstream suffix;
    suffix << "-p" << p;
    const std::string sfx = suffix.str();

    // (a) closed-form integral vs branch-wise quadrature; sign.
    const double closed = examples::triangle_cov_integral(p);
    auto cov_fn = [p](double r) { return examples::triangle_cov(p, r); };
    double quad = 0;
    const double b1 = 1.0 - p, b2 = p / 2.0;
    quad += integrate(cov_fn, 0.0, b1, 1e-13).value;
    quad += integrate(cov_fn, b1, b2, 1e-13).value;
    quad += integrate(cov_fn, b2, 0.5, 1e-13).value;
    quad *= 2.0;  // cov(r) = cov(1-r)
    ctx.check_abs("integral-quad-vs-closed" + sfx, quad, closed, 1e-8);
    if (p < 1.0) ctx.check_le("integral-negative" + sfx, closed, 0.0);

    // (b) empirical covariance across xi-replicates.
    std::vector<simulate::MarkedSetSample> samples(static_cast<size_t>(replicates));
    parallel_replicates(replicates, ctx.workers, [&](long r, int) {
      samples[static_cast<size_t>(r)] =
          simulate::periodic_triangle_sample(p, ctx.seed, static_cast<std::uint64_t>(r), nodes, 1);
    });

    estimate::EstimatorConfig cfg;
    for (int j = 0; j <= n_lags; ++j) {
      const long k = std::lround(static_cast<double>(j) * (static_cast<double>(nodes) / 2.0) /
                                 static_cast<double>(n_lags));
      const double r = static_cast<double>(k) * h;
      if (cfg.lags.empty() || cfg.lags.back() != r) cfg.lags.push_back(r);
    }
    estimate::KappaAccumulator acc(samples[0].grid, cfg);
    for (const auto& s : samples) acc.add_sample(s);

    auto os = open_out(ctx.path("periodic_example" + sfx + ".csv"));
    os << "kind,r,eps,estimate,stderr,pairs\n";
    estimate::write_estimates_csv(os, acc.estimates(estimate::FTag::kE));
    estimate::write_estimates_csv(os, acc.estimates(estimate::FTag::kC));
    estimate::write_estimates_csv(os, acc.estimates(estimate::FTag::kV));

    std::vector<estimate::KappaAccumulator::DerivedRow> derived;
    double worst_z = 0;
    size_t n_defined = 0;
    const double bias_budget = h;  // documented discretization budget (README)
    for (size_t li = 0; li < cfg.lags.size(); ++li) {
      const auto row = acc.derived_row(0, li, n_batches);
      derived.push_back(row);
      const double theory = examples::triangle_cov(p, row.r);
      if (row.defined && row.se_cov > 0) {
        ++n_defined;
        const double z = (std::abs(row.cov - theory) - bias_budget) / row.se_cov;
        worst_z = std::max(worst_z, z);
      }
    }
    ctx.check_true("all-lags-defined" + sfx,
                   n_defined == cfg.lags.size(),
                   fmt(static_cast<double>(n_defined)) + " of " +
                       fmt(static_cast<double>(cfg.lags.size())) + " lags had usable SEs");
    estimate::append_derived_csv(os, "", derived);
    for (size_t li = 0; li < cfg.lags.size(); ++li) {
      char line[120];
      std::snprintf(line, sizeof line, "cov_closed_form,%.17g,0,%.17g,0,0\n", cfg.lags[li],
                    examples::triangle_cov(p, cfg.lags[li]));
      os << line;
    }
    ctx.check_le("empirical-cov-worst-z" + sfx, worst_z, 3.0,
                 "max over lags of (|emp - closed| - grid bias) / SE");

    const auto kappa_e = acc.estimates(estimate::FTag::kE);
    ctx.check_abs("kappa-e-lag0" + sfx, kappa_e[0].estimate, examples::triangle_mean_mark(p),
                  3 * kappa_e[0].stderr_rep + 1e-9, "mean mark p/4 at lag 0");
  }
}

// -------------------------------------------------------- segment-singleton

void run_segment_singleton(Ctx& ctx) {
  const double p = ctx.cfg.at("p").get<double>();
  const long nodes = ctx.cfg.at("nodes_per_period").get<long>();
  const long periods = ctx.cfg.at("n_periods").get<long>();
  const long replicates = ctx.cfg.at("replicates").get<long>();
  const auto lags = ctx.cfg.at("lags").get<std::vector<double>>();
  const auto factors = ctx.cfg.at("eps_factors").get<std::vector<double>>();
  const double h = 2.0 / static_cast<double>(nodes);

  std::vector<simulate::MarkedSetSample> samples(static_cast<size_t>(replicates));
  parallel_replicates(replicates, ctx.workers, [&](long r, int) {
    samples[static_cast<size_t>(r)] = simulate::segment_singleton_sample(
        p, ctx.seed, static_cast<std::uint64_t>(r), nodes, periods);
  });

  estimate::EstimatorConfig cfg;
  cfg.lags = lags;
  for (double f : factors) cfg.epsilons.push_back(f * h);
  cfg.include_undilated = true;
  estimate::KappaAccumulator acc(samples[0].grid, cfg);
  for (const auto& s : samples) acc.add_sample(s);

  const auto rows_e = acc.estimates(estimate::FTag::kE);
  const auto rows_c = acc.estimates(estimate::FTag::kC);
  auto os = open_out(ctx.path("segment_singleton.csv"));
  os << "kind,r,eps,estimate,stderr,pairs\n";
  estimate::write_estimates_csv(os, rows_e);
  estimate::write_estimates_csv(os, rows_c);

  const size_t n_lags = cfg.lags.size();
  const size_t n_eps = acc.eps_levels().size();
  for (size_t li = 0; li < n_lags; ++li) {
    std::ostringstream sfx;
    sfx << "-r" << cfg.lags[li];
    std::vector<estimate::KappaEstimate> ladder;
    double min_pairs = HUGE_VAL, max_abs_c = 0;
    for (size_t ei = 0; ei + 1 < n_eps; ++ei) {  // eps > 0 levels
      const auto& row = rows_e[ei * n_lags + li];
      ladder.push_back(row);
      min_pairs = std::min(min_pairs, row.pairs);
      max_abs_c = std::max(max_abs_c, std::abs(rows_c[ei * n_lags + li].estimate));
    }
    const auto& undilated = rows_e[(n_eps - 1) * n_lags + li];
    ctx.check_abs("undilated-pair-count" + sfx.str(), undilated.pairs, 0.0, 0.0,
                  "P(o, o+r in Xi) = 0 regime: no pairs without dilation");
    ctx.check_ge("dilated-min-pair-count" + sfx.str(), min_pairs, 1.0);
    ctx.check_le("kappa-c-zero-on-ladder" + sfx.str(), max_abs_c, 1e-12,
                 "singleton marks are 0, so all mark products vanish");
    const auto diag = estimate::epsilon_limit_diagnostic(ladder);
    ctx.check_true("extrapolation-finite" + sfx.str(), std::isfinite(diag.extrapolated),
                   "kappa_e extrapolated to eps = 0: " + fmt(diag.extrapolated));
  }
}

// ------------------------------------------------------------- grf-empirical

CovarianceModel model_from_config(const json& cfg) {
  const std::string family = cfg.at("cov_family").get<std::string>();
  const double ell = cfg.at("length_scale").get<double>();
  if (family == "gaussian") return CovarianceModel::gaussian(ell);
  if (family == "exponential") return CovarianceModel::exponential(ell);
  if (family == "cosine") return CovarianceModel::cosine(1.0 / ell);
  throw std::invalid_argument("grf-empirical: unknown cov_family '" + family + "'");
}

void run_grf_empirical(Ctx& ctx) {
  const double t = ctx.cfg.at("t").get<double>();
  const long nodes = ctx.cfg.at("grid_nodes").get<long>();
  const double spacing = ctx.cfg.at("spacing").get<double>();
  const long replicates = ctx.cfg.at("replicates").get<long>();
  const int n_lags = ctx.cfg.at("n_lags").get<int>();
  const int n_batches = ctx.cfg.at("n_batches").get<int>();
  const CovarianceModel model = model_from_config(ctx.cfg);

  simulate::GridSpec grid;
  grid.dimension = 1;
  grid.extent = {static_cast<double>(nodes) * spacing, 0.0};
  grid.spacing = spacing;
  grid.periodic = true;

  std::vector<simulate::MarkedSetSample> samples(static_cast<size_t>(replicates));
  {
    std::vector<std::unique_ptr<simulate::GrfSampler>> samplers;
    const int workers = std::max(1, ctx.workers);
    samplers.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
      samplers.emplace_back(new simulate::GrfSampler(grid, model));
    parallel_replicates(replicates, workers, [&](long r, int w) {
      const std::vector<double> field =
          samplers[static_cast<size_t>(w)]->sample(ctx.seed, static_cast<std::uint64_t>(r));
      samples[static_cast<size_t>(r)] =
          simulate::excursion_sample(grid, field, t, ctx.seed, static_cast<std::uint64_t>(r));
    });
  }

  estimate::EstimatorConfig cfg;
  for (int j = 1; j <= n_lags; ++j) cfg.lags.push_back(spacing * j);
  estimate::KappaAccumulator acc(grid, cfg);
  for (const auto& s : samples) acc.add_sample(s);

  auto os = open_out(ctx.path("grf_empirical.csv"));
  os << "kind,r,eps,estimate,stderr,pairs\n";
  estimate::write_estimates_csv(os, acc.estimates(estimate::FTag::kE));
  estimate::write_estimates_csv(os, acc.estimates(estimate::FTag::kC));
  estimate::write_estimates_csv(os, acc.estimates(estimate::FTag::kV));

  std::vector<estimate::KappaAccumulator::DerivedRow> derived;
  int ok_E = 0, ok_cov = 0, ok_gamma = 0, ok_cor = 0, ok_kmm = 0;
  for (int j = 0; j < n_lags; ++j) {
    const auto row = acc.derived_row(0, static_cast<size_t>(j), n_batches);
    derived.push_back(row);
    const double rho = model(row.r);
    if (t == 0.0) {
      const gauss::TheoryT0 th = gauss::theory_t0(rho);
      if (std::abs(row.E - th.E) <= 3 * row.se_E) ++ok_E;
      if (std::abs(row.cov - th.cov) <= 3 * row.se_cov) ++ok_cov;
      if (std::abs(row.gamma - th.gamma) <= 3 * row.se_gamma) ++ok_gamma;
      if (std::abs(row.cor - th.cor) <= 3 * row.se_cor) ++ok_cor;
      if (std::abs(row.kmm - th.kmm) <= 3 * row.se_kmm) ++ok_kmm;
      char line[400];
      std::snprintf(line, sizeof line,
                    "E_theory,%.17g,0,%.17g,0,0\ncov_theory,%.17g,0,%.17g,0,0\n"
                    "gamma_theory,%.17g,0,%.17g,0,0\ncor_theory,%.17g,0,%.17g,0,0\n"
                    "kmm_theory,%.17g,0,%.17g,0,0\n",
                    row.r, th.E, row.r, th.cov, row.r, th.gamma, row.r, th.cor, row.r, th.kmm);
      os << line;
    } else {
      const double P = gauss::orthant_P(t, rho);
      const double E_th = gauss::E_t(t, rho) / P;
      const double cov_th = gauss::f_t(t, rho);
      if (std::abs(row.E - E_th) <= 3 * row.se_E) ++ok_E;
      if (std::abs(row.cov - cov_th) <= 3 * row.se_cov) ++ok_cov;
      char line[160];
      std::snprintf(line, sizeof line, "E_theory,%.17g,0,%.17g,0,0\ncov_theory,%.17g,0,%.17g,0,0\n",
                    row.r, E_th, row.r, cov_th);
      os << line;
    }
  }
  estimate::append_derived_csv(os, "", derived);

  const double need = std::ceil(0.95 * n_lags) - 0.5;  // >= 19 of 20 without float fuzz
  ctx.check_ge("E-lags-within-3se", ok_E, need);
  ctx.check_ge("cov-lags-within-3se", ok_cov, need);
  if (t == 0.0) {
    ctx.check_ge("gamma-lags-within-3se", ok_gamma, need);
    ctx.check_ge("cor-lags-within-3se", ok_cor, need);
    ctx.check_ge("kmm-lags-within-3se", ok_kmm, need);
  }
}

// ------------------------------------------------------------- orchestration

struct ExperimentDef {
  json defaults;
  void (*fn)(Ctx&);
};

const std::map<std::string, ExperimentDef>& registry() {
  static const std::map<std::string, ExperimentDef> reg = [] {
    std::map<std::string, ExperimentDef> r;
    json common = {{"seed", 20250814}, {"tolerance_scale", 1.0}, {"workers", 1}};
    auto with = [&common](json extra) {
      json d = common;
      for (auto& [k, v] : extra.items()) d[k] = v;
      return d;
    };
    r["theory-t0"] = {with({{"rho_points", 201}}), run_theory_t0};
    r["general-t"] = {with({{"t_values", {-1.0, 0.0, 1.0}},
                            {"rho_points", 161},
                            {"rho_min", -0.95}}),
                      run_general_t};
    r["derivative-check"] = {with({{"t_values", {-1.0, 0.0, 1.0, 2.0}}, {"length_scale", 1.0}}),
                             run_derivative_check};
    r["definiteness"] = {with({{"n_max", 8}, {"n_quad", 4096}, {"s_values", {1.0}}}),
                         run_definiteness};
    r["monotonicity"] = {with({{"order", 60}}), run_monotonicity};
    r["periodic-example"] = {with({{"p_values", {0.7, 0.8, 0.9}},
                                   {"replicates", 10000},
                                   {"nodes_per_period", 2000},
                                   {"n_lags", 12},
                                   {"n_batches", 100}}),
                             run_periodic_example};
    r["segment-singleton"] = {with({{"p", 0.3},
                                    {"nodes_per_period", 400},
                                    {"n_periods", 50},
                                    {"replicates", 200},
                                    {"lags", {1.0}},
                                    {"eps_factors", {8.0, 4.0, 2.0, 1.0}}}),
                              run_segment_singleton};
    r["grf-empirical"] = {with({{"t", 0.0},
                                {"grid_nodes", 1024},
                                {"spacing", 0.05},
                                {"cov_family", "gaussian"},
                                {"length_scale", 1.0},
                                {"replicates", 2000},
                                {"n_lags", 20},
                                {"n_batches", 50}}),
                          run_grf_empirical};
    return r;
  }();
  return reg;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
  }();
  return names;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool RunManifest::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json RunManifest::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"measured", c.measured},
                           {"expected", c.expected},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass},
                           {"note", c.note}});
  }
  char hash_hex[24];
  std::snprintf(hash_hex, sizeof hash_hex, "0x%016llx",
                static_cast<unsigned long long>(config_hash));
  return json{{"experiment", experiment},
              {"config_hash", hash_hex},
              {"code_version", code_version},
              {"wall_seconds", wall_seconds},
              {"config", json::parse(config_dump)},
              {"all_pass", all_pass()},
              {"checks", checks_json}};
}

RunManifest run_experiment(const std::string& name, const nlohmann::json& config,
                           const std::string& out_dir) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::ostringstream os;
    os << "unknown experiment '" << name << "'; valid names:";
    for (const auto& n : experiment_names()) os << ' ' << n;
    throw std::invalid_argument(os.str());
  }

  // Overlay on defaults; every key must already exist in the defaults except
  // `replicates`, which is accepted everywhere as a CLI-level override (it is
  // ignored by experiments that do not sample).
  json effective = it->second.defaults;
  for (const auto& [key, value] : config.items()) {
    if (!effective.contains(key) && key != "replicates") {
      throw std::invalid_argument("config key '" + key + "' is not valid for experiment '" +
                                  name + "' (see docs/config.md)");
    }
    effective[key] = value;
  }

  std::filesystem::create_directories(out_dir);

  Ctx ctx;
  ctx.cfg = effective;
  ctx.out_dir = out_dir;
  ctx.tol_scale = effective.at("tolerance_scale").get<double>();
  ctx.seed = effective.at("seed").get<std::uint64_t>();
  ctx.workers = std::max(1, effective.at("workers").get<int>());

  RunManifest manifest;
  manifest.experiment = name;
  manifest.config_dump = effective.dump();
  manifest.config_hash = fnv1a64(manifest.config_dump);

  const auto start = std::chrono::steady_clock::now();
  it->second.fn(ctx);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.checks = std::move(ctx.checks);

  open_out(out_dir + "/manifest.json") << manifest.to_json().dump(2) << '\n';
  return manifest;
}

void emit_plot_data(const std::vector<PlotPanel>& panels, const std::string& out_dir) {
  if (panels.empty()) throw std::invalid_argument("emit_plot_data: no panels");
  std::filesystem::create_directories(out_dir);
  for (const auto& p : panels) {
    if (p.rho.size() < 3 || p.rho.size() != p.f.size())
      throw std::invalid_argument("emit_plot_data: panel needs >= 3 aligned points");
    char namebuf[64];
    std::snprintf(namebuf, sizeof namebuf, "fig_ft_t%g.csv", p.t);
    auto os = open_out(out_dir + "/" + namebuf);
    os << "rho,f_t,f_t_prime\n";
    const size_t n = p.rho.size();
    for (size_t i = 0; i < n; ++i) {
      double d;
      if (i == 0) {
        d = (p.f[1] - p.f[0]) / (p.rho[1] - p.rho[0]);
      } else if (i == n - 1) {
        d = (p.f[n - 1] - p.f[n - 2]) / (p.rho[n - 1] - p.rho[n - 2]);
      } else {
        d = (p.f[i + 1] - p.f[i - 1]) / (p.rho[i + 1] - p.rho[i - 1]);
      }
      os << fmt(p.rho[i]) << ',' << fmt(p.f[i]) << ',' << fmt(d) << '\n';
    }
  }
}

nlohmann::json report_to_json(const mono::MonotonicityReport& rep) {
  json bounds = json::array();
  for (const auto& b : rep.bounds)
    bounds.push_back({{"n", b.n}, {"a_lower", b.a_lower}, {"b_upper", b.b_upper}, {"holds", b.holds}});
  return json{{"tag", rep.tag},
              {"order", rep.order},
              {"coefficients", rep.coefficients},
              {"min_coefficient", rep.min_coefficient},
              {"min_coefficient_index", rep.min_coefficient_index},
              {"direct_check_limit", rep.direct_check_limit},
              {"crossover_bounds", bounds},
              {"circle_max_abs_h2", rep.circle_max_abs_h2},
              {"circle_argmax_angle", rep.circle_argmax_angle},
              {"h2_at_one", rep.h2_at_one},
              {"verdict", rep.verdict}};
}

nlohmann::json report_to_json(const definiteness::DefinitenessReport& rep) {
  return json{{"method", rep.method},
              {"verdict", rep.verdict},
              {"witness_index", rep.witness_index},
              {"witness_location", rep.witness_location},
              {"witness_value", rep.witness_value},
              {"tolerance", rep.tolerance},
              {"detail", rep.detail}};
}

}  // namespace rmcs::experiments
