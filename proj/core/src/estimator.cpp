#include "rqmc/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace rqmc::estimator {

void ExperimentConfig::validate() const {
  if (k < 1) throw std::invalid_argument("ExperimentConfig: k must be >= 1");
  if (R < 1) throw std::invalid_argument("ExperimentConfig: R must be >= 1");
  if (m_range.empty()) throw std::invalid_argument("ExperimentConfig: m_range is empty");
  if (k_schedule && !(*k_schedule > 0.0)) throw std::invalid_argument("ExperimentConfig: schedule factor must be > 0");
  if (threads < 0) throw std::invalid_argument("ExperimentConfig: threads must be >= 0");
  for (int m : m_range) {
    auto net_m = net;
    net_m.m = m;
    net_m.validate();
  }
}

int ExperimentConfig::k_for(int m) const {
  if (!k_schedule) return k;
  return std::max(1, static_cast<int>(std::ceil(*k_schedule * m)));
}

int k_from_count(int count) {
  if (count < 1 || count % 2 == 0) throw std::invalid_argument("replicate count must be odd and >= 1");
  return (count + 1) / 2;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    c += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + c;
}

double estimate_mean(const integrands::Integrand& f, std::span<const netgen::PointSet> coords) {
  if (coords.size() != static_cast<std::size_t>(f.dim)) {
    throw std::invalid_argument("estimate_mean: integrand '" + f.name + "' has dimension " + std::to_string(f.dim) +
                                ", point set has " + std::to_string(coords.size()));
  }
  const std::size_t n = coords.front().size();
  for (const auto& c : coords) {
    if (c.size() != n) throw std::invalid_argument("estimate_mean: coordinates differ in size");
  }
  std::vector<double> x(coords.size());
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < coords.size(); ++j) x[j] = coords[j].real(i);
    const double v = f(x);
    const double t = sum + v;
    comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(n);
}

double estimate_mean(const integrands::Integrand& f, const netgen::PointSet& pts) {
  return estimate_mean(f, std::span<const netgen::PointSet>(&pts, 1));
}

double median(std::span<const double> values) {
  if (values.empty() || values.size() % 2 == 0) {
    throw std::invalid_argument("median: need an odd number of values, got " + std::to_string(values.size()));
  }
  std::vector<double> v(values.begin(), values.end());
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

std::vector<double> run_replicates(const ExperimentConfig& cfg, int m) {
  return run_replicates(cfg, integrands::lookup(cfg.integrand), m);
}

std::vector<gf2::BitMatrix> generators_for(const ExperimentConfig& cfg, int d, int m) {
  if (cfg.net.generator == netgen::GeneratorKind::identity) {
    if (d != 1) throw std::invalid_argument("identity generator needs a 1-dimensional integrand; use sobol");
    return {netgen::generator_identity(m)};
  }
  auto dn = cfg.directions;
  if (!dn) dn = std::make_shared<const sobol::DirectionNumbers>(sobol::DirectionNumbers::load_default());
  return netgen::generator_sobol(*dn, d, m);
}

std::vector<netgen::PointSet> replicate_points(const netgen::NetConfig& net, std::span<const gf2::BitMatrix> gens,
                                               std::uint64_t r) {
  std::vector<netgen::PointSet> coords;
  coords.reserve(gens.size());
  const int m = net.m;
  const int E = net.precision;
  auto rng = netgen::derive_replicate_rng(net.seed, r, static_cast<std::uint64_t>(m));
  for (const auto& C : gens) {
    auto M = [&] {
      switch (net.scramble) {
        case netgen::ScrambleKind::asm_striped: return netgen::asm_scramble(m, E);
        case netgen::ScrambleKind::identity: return netgen::identity_scramble(m, E);
        case netgen::ScrambleKind::random_linear: break;
      }
      return netgen::random_linear_scramble(m, E, rng);
    }();
    const auto D = netgen::random_digital_shift(E, rng);
    coords.push_back(netgen::generate_points(C, M, D));
  }
  return coords;
}

std::vector<double> run_replicates(const ExperimentConfig& cfg, const integrands::Integrand& f, int m) {
  cfg.validate();
  auto net = cfg.net;
  net.m = m;
  net.validate();
  const auto gens = generators_for(cfg, f.dim, m);

  const std::size_t total = static_cast<std::size_t>(cfg.R) * static_cast<std::size_t>(cfg.count_for(m));
  std::vector<double> out(total);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto coords = replicate_points(net, gens, r);
      out[r] = estimate_mean(f, coords);
    }
  };

  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(total, 1024))));
  if (threads == 1) {
    work(0, total);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (total + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(total, t * chunk);
    const std::size_t end = std::min(total, begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

namespace {

double root_mean_square_about(std::span<const double> v, double center) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - center) * (v[i] - center);
  return std::sqrt(compensated_sum(sq) / static_cast<double>(v.size()));
}

double sample_stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mean = compensated_sum(v) / static_cast<double>(v.size());
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  return std::sqrt(compensated_sum(sq) / static_cast<double>(v.size() - 1));
}

}  // namespace

MRecord aggregate(const ExperimentConfig& cfg, int m, std::span<const double> raw, std::optional<double> exact_mean) {
  const int count = cfg.count_for(m);
  if (raw.size() != static_cast<std::size_t>(cfg.R) * static_cast<std::size_t>(count)) {
    throw std::invalid_argument("aggregate: expected R (2k-1) raw estimates");
  }
  MRecord rec;
  rec.m = m;
  rec.n = std::uint64_t{1} << m;
  rec.count = count;
  rec.medians.reserve(static_cast<std::size_t>(cfg.R));
  for (int b = 0; b < cfg.R; ++b) {
    rec.medians.push_back(median(raw.subspan(static_cast<std::size_t>(b) * count, static_cast<std::size_t>(count))));
  }
  if (exact_mean) {
    rec.rmse_median = root_mean_square_about(rec.medians, *exact_mean);
    rec.rmse_plain = root_mean_square_about(raw, *exact_mean);
  } else {
    rec.stddev = true;
    rec.rmse_median = sample_stddev(rec.medians);
    rec.rmse_plain = sample_stddev(raw);
  }
  rec.rmse_mean_proxy = rec.rmse_plain / std::sqrt(static_cast<double>(count));
  if (cfg.keep_raw) rec.raw.assign(raw.begin(), raw.end());
  return rec;
}

EstimateReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto f = integrands::lookup(cfg.integrand);
  EstimateReport report;
  report.integrand = cfg.integrand;
  for (int m : cfg.m_range) {
    const auto raw = run_replicates(cfg, f, m);
    report.records.push_back(aggregate(cfg, m, raw, f.exact_mean));
  }
  return report;
}

RateFit fit_rate(std::span<const int> ms, std::span<const double> rmse, FitKind kind, int warmup) {
  if (ms.size() != rmse.size()) throw std::invalid_argument("fit_rate: m and rmse lengths differ");
  std::vector<long double> xs;
  std::vector<long double> ys;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i] < warmup || !(rmse[i] > 0.0) || !std::isfinite(rmse[i])) continue;
    if (std::find(xs.begin(), xs.end(), static_cast<long double>(ms[i])) != xs.end()) {
      throw std::invalid_argument("fit_rate: duplicate m");
    }
    xs.push_back(ms[i]);
    ys.push_back(std::log2(static_cast<long double>(rmse[i])));
  }
  if (xs.size() < 4) throw std::domain_error("fit_rate: degenerate fit, need at least 4 points with m >= warmup");

  // Center m for conditioning, solve the normal equations, then expand back.
  long double c = 0;
  for (auto x : xs) c += x;
  c /= static_cast<long double>(xs.size());
  const int p = kind == FitKind::quadratic ? 3 : 2;
  std::array<std::array<long double, 4>, 3> a{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double t = xs[i] - c;
    const long double basis[3] = {1.0L, t, t * t};
    for (int r = 0; r < p; ++r) {
      for (int s = 0; s < p; ++s) a[r][s] += basis[r] * basis[s];
      a[r][3] += basis[r] * ys[i];
    }
  }
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0) throw std::domain_error("fit_rate: singular normal equations");
    for (int r = 0; r < p; ++r) {
      if (r == col) continue;
      const long double f = a[r][col] / a[col][col];
      for (int s = col; s < 4; ++s) a[r][s] -= f * a[col][s];
    }
  }
  long double beta[3] = {0, 0, 0};
  for (int r = 0; r < p; ++r) beta[r] = a[r][3] / a[r][r];
  // y = b0 + b1 (m - c) + b2 (m - c)^2
  RateFit fit;
  fit.quad = static_cast<double>(beta[2]);
  fit.slope = static_cast<double>(beta[1] - 2 * beta[2] * c);
  fit.intercept = static_cast<double>(beta[0] - beta[1] * c + beta[2] * c * c);
  fit.points = static_cast<int>(xs.size());
  return fit;
}

RateFit fit_rate(const EstimateReport& report, Track track, FitKind kind, int warmup) {
  std::vector<int> ms;
  std::vector<double> ys;
  for (const auto& r : report.records) {
    ms.push_back(r.m);
    ys.push_back(track == Track::median ? r.rmse_median : track == Track::plain ? r.rmse_plain : r.rmse_mean_proxy);
  }
  return fit_rate(ms, ys, kind, warmup);
}

}  // namespace rqmc::estimator
