#include "rmcs/simulate.hpp"

#include <fftw3.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstring>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "rmcs/rng.hpp"

namespace rmcs::simulate {
namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex mu;  // FFTW's planner is not thread-safe; execution is
  return mu;
}

long checked_round_ratio(double num, double den, const char* what) {
  const double q = num / den;
  const long r = std::lround(q);
  if (r <= 0 || std::abs(q - static_cast<double>(r)) > 1e-9 * std::max(1.0, std::abs(q))) {
    std::ostringstream os;
    os << "GridSpec: " << what << " (" << num << " / " << den << ") must be a positive integer";
    throw std::invalid_argument(os.str());
  }
  return r;
}

}  // namespace

long GridSpec::nodes_along(int axis) const {
  const long periods = checked_round_ratio(extent[static_cast<size_t>(axis)], spacing, "extent/spacing");
  return periodic ? periods : periods + 1;
}

long GridSpec::total_nodes() const {
  long n = nodes_along(0);
  if (dimension == 2) n *= nodes_along(1);
  return n;
}

double GridSpec::coordinate(long flat_index, int axis) const {
  if (dimension == 1) return spacing * static_cast<double>(flat_index);
  const long n1 = nodes_along(1);
  const long i = flat_index / n1, j = flat_index % n1;
  return spacing * static_cast<double>(axis == 0 ? i : j);
}

void GridSpec::validate() const {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
  if (!(spacing > 0)) throw std::invalid_argument("GridSpec: spacing must be > 0");
  const long budget = 1L << 24;  // 16M nodes ~ 128 MB of doubles
  if (total_nodes() > budget) throw std::invalid_argument("GridSpec: exceeds node budget");
}

struct GrfSampler::Impl {
  GridSpec grid;
  CovarianceModel cov;
  long n = 0;                      // total nodes
  // Circulant path.
  std::vector<double> lambda;      // spectrum of the wrapped covariance
  std::vector<long> conj_index;    // index of the mirrored frequency
  fftw_complex* buf = nullptr;
  fftw_plan backward = nullptr;
  // Dense path.
  Eigen::MatrixXd factor;          // field = factor * iid normals

  Impl(const GridSpec& g, const CovarianceModel& c) : grid(g), cov(c) {}
  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (backward) fftw_destroy_plan(backward);
    if (buf) fftw_free(buf);
  }

  double torus_distance(long flat) const {
    if (grid.dimension == 1) {
      const long n0 = grid.nodes_along(0);
      const long k = std::min(flat, n0 - flat);
      return grid.spacing * static_cast<double>(k);
    }
    const long n0 = grid.nodes_along(0), n1 = grid.nodes_along(1);
    const long i = flat / n1, j = flat % n1;
    const long ki = std::min(i, n0 - i), kj = std::min(j, n1 - j);
    const double dx = grid.spacing * static_cast<double>(ki);
    const double dy = grid.spacing * static_cast<double>(kj);
    return std::sqrt(dx * dx + dy * dy);
  }

  double pair_distance(long a, long b) const {
    if (grid.dimension == 1) {
      long d = std::labs(a - b);
      if (grid.periodic) d = std::min(d, grid.nodes_along(0) - d);
      return grid.spacing * static_cast<double>(d);
    }
    const long n0 = grid.nodes_along(0), n1 = grid.nodes_along(1);
    long di = std::labs(a / n1 - b / n1), dj = std::labs(a % n1 - b % n1);
    if (grid.periodic) {
      di = std::min(di, n0 - di);
      dj = std::min(dj, n1 - dj);
    }
    const double dx = grid.spacing * static_cast<double>(di);
    const double dy = grid.spacing * static_cast<double>(dj);
    return std::sqrt(dx * dx + dy * dy);
  }
};

GrfSampler::GrfSampler(const GridSpec& grid, const CovarianceModel& cov)
    : impl_(new Impl(grid, cov)) {
  grid.validate();
  Impl& im = *impl_;
  im.n = grid.total_nodes();
  const long n = im.n;

  bool circulant_ok = false;
  if (grid.periodic) {
    // Wrapped covariance c[k] = R(torus distance); its DFT is the spectrum.
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    im.buf = fftw_alloc_complex(static_cast<size_t>(n));
    if (grid.dimension == 1) {
      im.backward = fftw_plan_dft_1d(static_cast<int>(n), im.buf, im.buf, FFTW_BACKWARD,
                                     FFTW_ESTIMATE);
    } else {
      im.backward = fftw_plan_dft_2d(static_cast<int>(grid.nodes_along(0)),
                                     static_cast<int>(grid.nodes_along(1)), im.buf, im.buf,
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_plan forward = (grid.dimension == 1)
                            ? fftw_plan_dft_1d(static_cast<int>(n), im.buf, im.buf, FFTW_FORWARD,
                                               FFTW_ESTIMATE)
                            : fftw_plan_dft_2d(static_cast<int>(grid.nodes_along(0)),
                                               static_cast<int>(grid.nodes_along(1)), im.buf,
                                               im.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    for (long k = 0; k < n; ++k) {
      im.buf[k][0] = cov(im.torus_distance(k));
      im.buf[k][1] = 0.0;
    }
    fftw_execute(forward);
    fftw_destroy_plan(forward);

    im.lambda.resize(static_cast<size_t>(n));
    double max_lambda = 0;
    for (long k = 0; k < n; ++k)
      max_lambda = std::max(max_lambda, im.buf[k][0]);
    double most_neg = 0;
    long clipped = 0;
    bool negative = false;
    for (long k = 0; k < n; ++k) {
      double lam = im.buf[k][0];
      most_neg = std::min(most_neg, lam);
      if (lam < 0) {
        if (lam >= -1e-10 * std::max(max_lambda, 1.0)) {
          lam = 0;
          ++clipped;
        } else {
          negative = true;
        }
      }
      im.lambda[static_cast<size_t>(k)] = lam;
    }
    clipped_ = clipped;
    most_negative_ = most_neg;
    if (!negative) {
      circulant_ok = true;
      // Mirrored frequency of k: per-axis negation modulo the axis size.
      im.conj_index.resize(static_cast<size_t>(n));
      if (grid.dimension == 1) {
        for (long k = 0; k < n; ++k) im.conj_index[static_cast<size_t>(k)] = (n - k) % n;
      } else {
        const long n0 = grid.nodes_along(0), n1 = grid.nodes_along(1);
        for (long i = 0; i < n0; ++i)
          for (long j = 0; j < n1; ++j)
            im.conj_index[static_cast<size_t>(i * n1 + j)] = ((n0 - i) % n0) * n1 + ((n1 - j) % n1);
      }
      method_ = "circulant";
    }
  }

  if (!circulant_ok) {
    if (n > 4096) {
      std::ostringstream os;
      if (grid.periodic) {
        os << "sample_grf: circulant embedding not nonnegative (most negative eigenvalue "
           << most_negative_ << ") and grid too large for the dense fallback (" << n << " > 4096)";
      } else {
        os << "sample_grf: non-periodic grid with " << n
           << " nodes exceeds the dense-factorization limit (4096)";
      }
      throw std::runtime_error(os.str());
    }
    Eigen::MatrixXd C(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j <= i; ++j) {
        C(i, j) = cov(impl_->pair_distance(i, j));
        C(j, i) = C(i, j);
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    const double max_ev = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd clipped_ev = es.eigenvalues();
    for (long k = 0; k < n; ++k) {
      most_negative_ = std::min(most_negative_, clipped_ev(k));
      if (clipped_ev(k) < 0) {
        if (clipped_ev(k) < -1e-8 * std::max(max_ev, 1.0)) {
          std::ostringstream os;
          os << "sample_grf: covariance matrix not numerically PSD (eigenvalue " << clipped_ev(k)
             << ")";
          throw std::runtime_error(os.str());
        }
        clipped_ev(k) = 0;
        ++clipped_;
      }
    }
    impl_->factor = es.eigenvectors() * clipped_ev.cwiseSqrt().asDiagonal();
    method_ = "dense";
  }
}

GrfSampler::~GrfSampler() = default;

std::vector<double> GrfSampler::sample(std::uint64_t seed, std::uint64_t replicate) {
  Impl& im = *impl_;
  const long n = im.n;
  RandomStream stream(seed, stream_id(StreamPurpose::kFieldSpectrum, replicate));
  std::vector<double> out(static_cast<size_t>(n));

  if (method_ == "dense") {
    Eigen::VectorXd z(n);
    for (long k = 0; k < n; ++k) z(k) = stream.normal(static_cast<std::uint64_t>(k));
    Eigen::VectorXd x = im.factor * z;
    for (long k = 0; k < n; ++k) out[static_cast<size_t>(k)] = x(k);
    return out;
  }

  // Hermitian spectrum with independent real/imaginary normal parts; the
  // backward transform divided by n then has covariance c (the wrapped R).
  const double dn = static_cast<double>(n);
  for (long k = 0; k < n; ++k) {
    const long c = im.conj_index[static_cast<size_t>(k)];
    const double lam = im.lambda[static_cast<size_t>(k)];
    if (c == k) {
      im.buf[k][0] = std::sqrt(lam * dn) * stream.normal(2 * static_cast<std::uint64_t>(k));
      im.buf[k][1] = 0.0;
    } else if (k < c) {
      const double scale = std::sqrt(lam * dn / 2.0);
      const double a = stream.normal(2 * static_cast<std::uint64_t>(k));
      const double b = stream.normal(2 * static_cast<std::uint64_t>(k) + 1);
      im.buf[k][0] = scale * a;
      im.buf[k][1] = scale * b;
      im.buf[c][0] = scale * a;
      im.buf[c][1] = -scale * b;
    }
  }
  fftw_execute(im.backward);
  for (long k = 0; k < n; ++k) out[static_cast<size_t>(k)] = im.buf[k][0] / dn;
  return out;
}

std::vector<double> sample_grf(const GridSpec& grid, const CovarianceModel& cov,
                               std::uint64_t seed, std::uint64_t replicate) {
  GrfSampler sampler(grid, cov);
  return sampler.sample(seed, replicate);
}

MarkedSetSample excursion_sample(const GridSpec& grid, const std::vector<double>& field, double t,
                                 std::uint64_t seed, std::uint64_t replicate) {
  if (static_cast<long>(field.size()) != grid.total_nodes())
    throw std::invalid_argument("excursion_sample: field size does not match grid");
  MarkedSetSample s;
  s.grid = grid;
  s.membership.resize(field.size());
  s.marks.resize(field.size());
  for (size_t i = 0; i < field.size(); ++i) {
    const bool in = field[i] >= t;
    s.membership[i] = in ? 1 : 0;
    s.marks[i] = in ? field[i] : 0.0;
  }
  std::ostringstream os;
  os << "gaussian-excursion(t=" << t << ")";
  s.model = os.str();
  s.seed = seed;
  s.replicate = replicate;
  return s;
}

MarkedSetSample periodic_triangle_sample(double p, std::uint64_t seed, std::uint64_t replicate,
                                         long nodes_per_period, long n_periods) {
  if (!(p > 2.0 / 3.0 && p <= 1.0))
    throw std::invalid_argument("periodic_triangle_sample: p must lie in (2/3, 1]");
  if (n_periods < 1) throw std::invalid_argument("periodic_triangle_sample: n_periods >= 1");
  const double h = 1.0 / static_cast<double>(nodes_per_period);
  if (!(h <= p / 200.0))
    throw std::invalid_argument("periodic_triangle_sample: spacing must be <= p/200");

  GridSpec grid;
  grid.dimension = 1;
  grid.extent = {static_cast<double>(n_periods), 0.0};
  grid.spacing = h;
  grid.periodic = true;
  grid.validate();

  RandomStream stream(seed, stream_id(StreamPurpose::kModelOffset, replicate));
  const double xi = stream.uniform(0);

  const long n = grid.total_nodes();
  MarkedSetSample s;
  s.grid = grid;
  s.membership.assign(static_cast<size_t>(n), 0);
  s.marks.assign(static_cast<size_t>(n), 0.0);
  for (long j = 0; j < n; ++j) {
    const double x = h * static_cast<double>(j);
    double u = std::fmod(x - xi, 1.0);
    if (u < 0) u += 1.0;
    if (u <= p) {
      s.membership[static_cast<size_t>(j)] = 1;
      s.marks[static_cast<size_t>(j)] = (u < p / 2.0) ? u : p - u;
    }
  }
  std::ostringstream os;
  os << "periodic-triangle(p=" << p << ")";
  s.model = os.str();
  s.seed = seed;
  s.replicate = replicate;
  return s;
}

MarkedSetSample segment_singleton_sample(double p, std::uint64_t seed, std::uint64_t replicate,
                                         long nodes_per_period, long n_periods) {
  if (!(p > 0.0 && p < 1.0 / 3.0))
    throw std::invalid_argument("segment_singleton_sample: p must lie in (0, 1/3)");
  if (n_periods < 1) throw std::invalid_argument("segment_singleton_sample: n_periods >= 1");
  if (nodes_per_period < 8 || nodes_per_period % 2 != 0)
    throw std::invalid_argument("segment_singleton_sample: nodes_per_period must be even, >= 8");
  const double h = 2.0 / static_cast<double>(nodes_per_period);
  if (!(h < p / 4.0))
    throw std::invalid_argument("segment_singleton_sample: spacing too coarse for p");

  GridSpec grid;
  grid.dimension = 1;
  grid.extent = {2.0 * static_cast<double>(n_periods), 0.0};
  grid.spacing = h;
  grid.periodic = true;
  grid.validate();

  RandomStream stream(seed, stream_id(StreamPurpose::kModelOffset, replicate));
  const double xi = stream.uniform(0);  // uniform on [0,1) as in the source model

  const long n = grid.total_nodes();
  MarkedSetSample s;
  s.grid = grid;
  s.membership.assign(static_cast<size_t>(n), 0);
  s.marks.assign(static_cast<size_t>(n), 0.0);
  for (long j = 0; j < n; ++j) {
    const double x = h * static_cast<double>(j);
    double u = std::fmod(x - xi, 2.0);
    if (u < 0) u += 2.0;
    const double d = std::min(u, 2.0 - u);  // distance to the segment center lattice
    if (d <= p) {
      s.membership[static_cast<size_t>(j)] = 1;
      s.marks[static_cast<size_t>(j)] = p - d;  // distance to the set boundary
    }
  }
  // Singletons at xi + 1 + 2z, snapped to the nearest node; mark 0 (a point
  // is its own boundary).  p < 1/3 keeps them well clear of the segments.
  for (long z = 0; z < n_periods; ++z) {
    const double q = xi + 1.0 + 2.0 * static_cast<double>(z);
    long node = std::lround(q / h) % n;
    if (node < 0) node += n;
    s.singletons.push_back({node, 0.0});
  }
  std::ostringstream os;
  os << "segment-singleton(p=" << p << ")";
  s.model = os.str();
  s.seed = seed;
  s.replicate = replicate;
  return s;
}

void write_sample_csv(const MarkedSetSample& sample, std::ostream& os) {
  const bool two_d = sample.grid.dimension == 2;
  os << (two_d ? "x,y,membership,singleton,mark\n" : "x,membership,singleton,mark\n");
  std::vector<std::uint8_t> singleton_flag(sample.membership.size(), 0);
  std::vector<double> singleton_mark(sample.membership.size(), 0.0);
  for (const auto& sg : sample.singletons) {
    singleton_flag[static_cast<size_t>(sg.node)] = 1;
    singleton_mark[static_cast<size_t>(sg.node)] = sg.mark;
  }
  char line[160];
  for (size_t i = 0; i < sample.membership.size(); ++i) {
    const double mark = sample.membership[i] ? sample.marks[i] : singleton_mark[i];
    if (two_d) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%d,%.17g\n",
                    sample.grid.coordinate(static_cast<long>(i), 0),
                    sample.grid.coordinate(static_cast<long>(i), 1), int(sample.membership[i]),
                    int(singleton_flag[i]), mark);
    } else {
      std::snprintf(line, sizeof line, "%.17g,%d,%d,%.17g\n",
                    sample.grid.coordinate(static_cast<long>(i), 0), int(sample.membership[i]),
                    int(singleton_flag[i]), mark);
    }
    os << line;
  }
}

void write_sample_binary(const MarkedSetSample& sample, std::ostream& os) {
  const char magic[8] = {'R', 'M', 'C', 'S', '0', '0', '0', '1'};
  os.write(magic, 8);
  auto put_u64 = [&os](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
  };
  auto put_f64 = [&put_u64](double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    put_u64(u);
  };
  put_u64(static_cast<std::uint64_t>(sample.grid.dimension));
  put_u64(static_cast<std::uint64_t>(sample.grid.periodic ? 1 : 0));
  put_f64(sample.grid.spacing);
  put_f64(sample.grid.extent[0]);
  put_f64(sample.grid.extent[1]);
  put_u64(static_cast<std::uint64_t>(sample.membership.size()));
  for (size_t i = 0; i < sample.membership.size(); ++i) {
    put_u64(sample.membership[i]);
    put_f64(sample.marks[i]);
  }
  put_u64(static_cast<std::uint64_t>(sample.singletons.size()));
  for (const auto& sg : sample.singletons) {
    put_u64(static_cast<std::uint64_t>(sg.node));
    put_f64(sg.mark);
  }
}

}  // namespace rmcs::simulate
